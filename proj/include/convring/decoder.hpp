#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "convring/cap.hpp"
#include "convring/code.hpp"
#include "convring/zp_linalg.hpp"

namespace convring {

/// A received symbol; nullopt marks an erasure.
using Symbol = std::optional<Residue>;
using ReceivedSlice = std::vector<Symbol>;
using Received = std::vector<ReceivedSlice>;

Received to_received(const Window& w);

/// Erased columns of the sliding equations for times start..end, rows for
/// the same times. Unknowns are ordered time-major, then by coordinate.
///
/// Each row is divided by the largest p-power dividing all its coefficients;
/// that power is the row's stratum and the divided row holds modulo
/// p^{r - stratum}.
struct WindowSystem {
  RingContext ring;
  std::size_t n = 0;
  std::size_t start = 0;
  std::size_t end = 0;
  std::vector<std::pair<std::size_t, std::size_t>> unknowns;
  /// Rows before division, with right-hand side minus the known contribution.
  ConstantMatrix raw;
  std::vector<Residue> raw_rhs;
  /// Surviving divided rows.
  ConstantMatrix coeffs;
  std::vector<Residue> rhs;
  std::vector<unsigned> strata;
  /// Set when a row cannot hold for any filling.
  std::optional<std::string> invalid;

  std::size_t e() const noexcept { return unknowns.size(); }
};

/// Throws UsageError when a symbol before time i is erased or i is past the end.
WindowSystem build_window_system(const ConvCode& code, const Received& received, std::size_t i,
                                 std::size_t delay);

/// base + sum_i k_i * generators[i], with k_i in [0, p^{log_ranges[i]}).
/// Distinct coefficient choices give distinct points.
struct ParametrizedSet {
  std::vector<Residue> base;
  std::vector<std::vector<Residue>> generators;
  std::vector<unsigned> log_ranges;

  std::size_t log_size() const noexcept;
};

struct DigitStageResult {
  unsigned stage = 0;
  std::size_t rank = 0;
  /// Digit solutions of this stage with all earlier parameters at zero.
  AffineSet set = AffineSet::empty(RingContext::prime_field(2), 0);
  /// Column j: how earlier parameter j shifts this stage's digits.
  std::vector<std::vector<Residue>> coupling;
  std::size_t first_new_parameter = 0;
  std::size_t new_parameters = 0;
  bool constraints_fired = false;
};

enum class OutcomeKind { Unique, List, Invalid };

struct DecodeOutcome {
  OutcomeKind kind = OutcomeKind::Invalid;
  std::vector<DigitStageResult> stages;
  ParametrizedSet solutions;
  bool constraints_fired = false;
  /// Stage and message of the failed check when kind is Invalid.
  std::optional<unsigned> invalid_stage;
  std::string invalid_reason;
  OpCounter ops;

  /// log_p of the list size.
  std::size_t log_list_size() const noexcept { return solutions.log_size(); }
  /// p^{log_list_size}, saturating at UINT64_MAX.
  std::uint64_t list_size(std::uint64_t p) const noexcept;
};

DecodeOutcome list_decode(const WindowSystem& sys);

/// nullopt unless the undivided system has full McCoy rank; then the unique
/// solution or an Invalid outcome.
std::optional<DecodeOutcome> try_unique_decode(const WindowSystem& sys);

/// Visits solution vectors (over the unknowns) of a List or Unique outcome.
/// Stops early when visit returns false.
void for_each_solution(const RingContext& ring, const DecodeOutcome& outcome,
                       const std::function<bool(const std::vector<Residue>&)>& visit);

struct MaterializedList {
  std::vector<Window> windows;
  bool truncated = false;
};

/// Windows start..end with every solution substituted into the received word.
MaterializedList materialize_list(const WindowSystem& sys, const DecodeOutcome& outcome,
                                  const Received& received, std::size_t limit);

/// Brute-force solution vectors of the same window equations, by backtracking
/// with a row check once a row's last unknown is fixed. Throws CapExceeded
/// when more than `cap` search nodes would be visited.
std::vector<std::vector<Residue>> oracle_decode(const ConvCode& code, const Received& received,
                                                std::size_t i, std::size_t delay,
                                                std::uint64_t cap = enumeration_cap());

enum class ListPolicy { EmitListAndHalt, PickFirst, PickAndBranchBounded };

struct SequentialStep {
  std::size_t time = 0;
  std::size_t window_end = 0;
  std::size_t erasures = 0;
  std::size_t rows = 0;
  bool unique = false;
  OutcomeKind kind = OutcomeKind::Unique;
  std::size_t log_list_size = 0;
  std::uint64_t ops = 0;
  std::vector<std::size_t> ranks;
  double wall_ms = 0.0;
};

enum class SequentialStatus { Complete, HaltedOnList, Invalid };

struct SequentialResult {
  SequentialStatus status = SequentialStatus::Complete;
  Received stream;
  std::vector<SequentialStep> steps;
  /// The list outcome that stopped decoding under EmitListAndHalt.
  std::optional<DecodeOutcome> halting_outcome;
};

/// Slides a window over the stream. Unique w^i values are substituted and
/// decoding moves on; lists are handled by the policy. The stream is taken as
/// given, without implicit trailing slices.
SequentialResult sequential_decode(const ConvCode& code, const Received& received, std::size_t delay,
                                   ListPolicy policy = ListPolicy::EmitListAndHalt,
                                   std::size_t branch_limit = 4);

}  // namespace convring
