#pragma once

#include <vector>

#include "convring/matrix.hpp"

namespace convring {

/// U A V = diag(p^{v_0}, ..., p^{v_{rank-1}}, 0, ...) over Z_{p^r}, with U, V
/// invertible and Uinv = U^{-1}. Valuations are nondecreasing and below r.
struct ZqSmith {
  ConstantMatrix u;
  ConstantMatrix u_inv;
  ConstantMatrix v;
  std::vector<unsigned> valuations;
};

ZqSmith smith_zq(const ConstantMatrix& a);

/// Finite Z_{p^r}-module base + <generators>, where generator i has additive
/// order p^{log_orders[i]} and the generators are independent, so the set has
/// exactly p^{sum log_orders} elements.
struct ZqCoset {
  bool feasible = false;
  std::vector<Residue> base;
  std::vector<std::vector<Residue>> generators;
  std::vector<unsigned> log_orders;
};

/// All solutions of A x = b over Z_{p^r}.
ZqCoset solve_zq(const ConstantMatrix& a, std::span<const Residue> b);

/// The submodule spanned by the columns of g, as independent generators.
ZqCoset column_module(const ConstantMatrix& g);

}  // namespace convring
