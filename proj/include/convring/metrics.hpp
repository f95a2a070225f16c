#pragma once

#include <optional>
#include <vector>

#include "convring/cap.hpp"
#include "convring/code.hpp"

namespace convring {

std::size_t hamming_weight(const Window& w);
std::size_t hamming_weight(const PolyVector& w);

struct ColumnDistance {
  std::size_t distance;
  /// A kernel window (w^0, ..., w^j) with w^0 != 0 and weight `distance`.
  Window witness;
};

/// Minimum weight of windows satisfying the sliding parity-check equations
/// with w^0 != 0; nullopt when no such window exists. Counts supports against
/// the cap and throws CapExceeded beyond it.
std::optional<ColumnDistance> column_distance(const ConvCode& code, unsigned j,
                                              std::uint64_t cap = enumeration_cap());

struct FreeDistance {
  std::size_t weight;
  /// Set when the bound matches a column distance, which closes the search.
  bool exact;
  PolyVector witness;
};

/// Minimum weight over nonzero codewords G^T u with deg u <= max_degree;
/// nullopt for the zero code.
std::optional<FreeDistance> free_distance_bounded(const ConvCode& code, unsigned max_degree,
                                                  std::uint64_t cap = enumeration_cap());

struct ErasureCapabilityReport {
  /// No dependency over Z_{p^r} among d-1 columns of H_j^c that involves one
  /// of the first n columns with a nonzero coefficient.
  bool small_sets_independent = false;
  /// Some d columns carry such a dependency.
  bool dependent_set_found = false;
  std::vector<std::size_t> dependent_columns;
  /// No first-n column of [H_j^c]_p lies in the Z_p-span of d-2 other columns.
  bool projected_span_condition = false;
};

ErasureCapabilityReport erasure_capability_check(const ConvCode& code, unsigned j, std::size_t d,
                                                 std::uint64_t cap = enumeration_cap());

/// Whether the erased positions (indices into the flattened window) leave
/// the first slice uniquely determined by the sliding equations.
bool first_slice_recoverable(const ConstantMatrix& sliding, std::size_t n,
                             const std::vector<std::size_t>& erased);

}  // namespace convring
