#pragma once

// Random codes, batch trials over an erasure channel, and the cost probe.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "convring/channel.hpp"
#include "convring/code.hpp"
#include "convring/decoder.hpp"

namespace convring {

/// Entries of degree <= max_degree with coefficients uniform in [0, bound).
PolyMatrix random_poly_matrix(const RingContext& ring, std::size_t rows, std::size_t cols,
                              unsigned max_degree, Residue bound, std::mt19937_64& rng);

struct GeneratedCode {
  ConvCode code;
  std::size_t attempts = 0;
};

/// Samples standard-form generator blocks until the projected stack is left
/// prime. Throws UsageError for infeasible shapes and GenerationFailed when
/// max_attempts samples all fail.
GeneratedCode generate_observable_code(const RingContext& ring, std::size_t n,
                                       const std::vector<std::size_t>& k_blocks, unsigned degree,
                                       std::uint64_t seed, std::size_t max_attempts = 200);

/// Code defined by random parity-check blocks with the given row counts;
/// nullopt when the projected H-stack is not left prime (so no generator).
std::optional<ConvCode> random_parity_code(const RingContext& ring, std::size_t n,
                                           const std::vector<std::size_t>& l_blocks,
                                           unsigned degree, std::mt19937_64& rng);

/// First `length` slices of G^T u for a random input of degree < length.
Window random_codeword_window(const ConvCode& code, std::size_t length, std::mt19937_64& rng);

struct TrialConfig {
  ChannelConfig channel;
  std::size_t length = 8;
  std::size_t delay = 2;
  ListPolicy policy = ListPolicy::PickFirst;
  /// Wall time makes reports nondeterministic, so it is opt-in.
  bool timing = false;
};

struct WindowReport {
  std::size_t time = 0;
  std::size_t end = 0;
  std::size_t e = 0;
  std::size_t rows = 0;
  std::vector<std::size_t> ranks;
  OutcomeKind kind = OutcomeKind::Unique;
  std::size_t log_list_size = 0;
  std::uint64_t list_size = 1;
  std::uint64_t ops = 0;
  std::optional<double> wall_ms;
};

struct TrialReport {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::size_t erasures = 0;
  SequentialStatus status = SequentialStatus::Complete;
  bool recovered = false;
  std::vector<WindowReport> windows;
};

TrialReport run_trial(const ConvCode& code, const TrialConfig& cfg, std::size_t index,
                      std::uint64_t master_seed);
/// Trials run on `threads` workers; the result is ordered by trial index and
/// does not depend on the thread count.
std::vector<TrialReport> run_trials(const ConvCode& code, const TrialConfig& cfg, std::size_t count,
                                    std::uint64_t master_seed, unsigned threads = 0);

std::string reports_to_json(const std::vector<TrialReport>& reports, std::uint64_t p);
std::vector<TrialReport> reports_from_json(const std::string& text);

struct ShapeStats {
  std::size_t e = 0;
  std::size_t rows = 0;
  std::size_t windows = 0;
  std::size_t unique = 0;
  double mean_list_size = 0.0;
  double mean_ops = 0.0;
};

struct Summary {
  std::size_t trials = 0;
  std::size_t recovered_trials = 0;
  std::size_t windows = 0;
  std::size_t unique_windows = 0;
  std::size_t invalid_windows = 0;
  /// Over windows that did not come out Invalid; nullopt when there are none.
  std::optional<double> mean_list_size;
  std::uint64_t total_ops = 0;
  std::vector<ShapeStats> by_shape;
};

Summary summarize(const std::vector<TrialReport>& reports);
std::string summary_to_json(const Summary& s);
std::string summary_to_csv(const Summary& s);

/// Operation counts of one parameter sweep against the elimination model.
struct ProbeSweep {
  std::string name;
  std::vector<double> x;
  std::vector<double> ops;
  double slope = 0.0;
  double model_slope = 0.0;
  bool pass = false;
};

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Sweeps e, the window row count (n-k)(T+1), and r over random parity-check
/// codes with every erasure pattern placed in one window of the zero word.
std::vector<ProbeSweep> run_cost_probe(std::uint64_t seed, unsigned repeats = 3);
std::string probe_to_json(const std::vector<ProbeSweep>& sweeps);

const char* to_string(OutcomeKind k);
const char* to_string(SequentialStatus s);

}  // namespace convring
