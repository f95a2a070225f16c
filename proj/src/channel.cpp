#include "convring/channel.hpp"

#include "convring/errors.hpp"

namespace convring {

void validate(const ChannelConfig& cfg) {
  for (double v : {cfg.eps, cfg.loss_good, cfg.loss_bad, cfg.good_to_bad, cfg.bad_to_good})
    if (!(v >= 0.0 && v <= 1.0)) throw UsageError("channel probabilities must lie in [0, 1]");
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master + 0x9e3779b97f4a7c15ULL * (index + 1));
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

ErasureList apply_channel(StreamFile& stream, const ChannelConfig& cfg) {
  validate(cfg);
  std::mt19937_64 rng(cfg.seed);
  ErasureList erased;
  bool bad = false;
  for (std::size_t t = 0; t < stream.symbols.size(); ++t)
    for (std::size_t c = 0; c < stream.symbols[t].size(); ++c) {
      double loss = cfg.eps;
      if (cfg.model == ChannelConfig::Model::GilbertElliott) loss = bad ? cfg.loss_bad : cfg.loss_good;
      // A probability of 1 always erases; uniform01 never returns 1.
      if (uniform01(rng) < loss) {
        if (stream.symbols[t][c]) erased.emplace_back(t, c);
        stream.symbols[t][c].reset();
      } else if (!stream.symbols[t][c]) {
        erased.emplace_back(t, c);
      }
      if (cfg.model == ChannelConfig::Model::GilbertElliott) {
        const double u = uniform01(rng);
        bad = bad ? !(u < cfg.bad_to_good) : u < cfg.good_to_bad;
      }
    }
  return erased;
}

}  // namespace convring
