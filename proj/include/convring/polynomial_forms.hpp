#pragma once

#include <utility>
#include <vector>

#include "convring/poly_matrix.hpp"

namespace convring {

/// U A V = S over Z_p[D]. Vinv is V^{-1}, kept alongside so completions do
/// not need a separate inversion.
struct SmithForm {
  PolyMatrix u;
  PolyMatrix s;
  PolyMatrix v;
  PolyMatrix v_inv;
  /// min(rows, cols) diagonal entries; monic, each dividing the next, zeros last.
  std::vector<Poly> factors;
};

SmithForm smith_form(const PolyMatrix& a);

/// All invariant factors equal to 1. Throws UsageError when rows > cols.
bool is_left_prime(const PolyMatrix& a);

/// (n-k) x n rows N with [A; N] unimodular over Z_p[D]. Throws NotLeftPrime.
PolyMatrix unimodular_complete(const PolyMatrix& a);
/// Rows N with det [A; N] nonzero, for A of full row rank that need not be
/// left prime. Throws ConstructionError when A is rank deficient.
PolyMatrix nonsingular_complete(const PolyMatrix& a);

/// Exact inverse over Z_p[D]; throws NotUnimodular.
PolyMatrix inverse_zp(const PolyMatrix& a);

/// Reads a unimodular Z_p[D] matrix in Z_{p^r}[D]; throws UsageError when the
/// input is not unimodular.
PolyMatrix lift_unimodular(const PolyMatrix& u_p, const RingContext& target);

/// Inverse over Z_{p^r}[D] by Newton iteration from the Z_p inverse.
/// Throws NotUnimodular when [U]_p is not unimodular.
PolyMatrix invert_unimodular(const PolyMatrix& u);

Poly determinant(const PolyMatrix& m);
/// (adj(M), det(M)) with adj(M) M = M adj(M) = det(M) I.
std::pair<PolyMatrix, Poly> adjugate(const PolyMatrix& m);

}  // namespace convring
