#pragma once

#include <cstdint>
#include <random>

#include "convring/io.hpp"

namespace convring {

struct ChannelConfig {
  enum class Model { Iid, GilbertElliott };
  Model model = Model::Iid;
  double eps = 0.0;
  // Gilbert-Elliott: loss probability per state and state transitions.
  double loss_good = 0.0;
  double loss_bad = 1.0;
  double good_to_bad = 0.0;
  double bad_to_good = 1.0;
  std::uint64_t seed = 0;
};

/// Throws UsageError when a probability lies outside [0, 1].
void validate(const ChannelConfig& cfg);

std::uint64_t splitmix64(std::uint64_t x);
/// Seed for trial `index`, derived in counter mode from the master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);
/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
double uniform01(std::mt19937_64& rng);

/// Erases symbols in place, time-major, and returns the erased positions.
ErasureList apply_channel(StreamFile& stream, const ChannelConfig& cfg);

}  // namespace convring
