#pragma once

#include <ostream>
#include <span>
#include <vector>

#include "convring/matrix.hpp"
#include "convring/poly.hpp"

namespace convring {

/// Dense matrix of polynomials sharing one ring. Carries G(D), H(D) and the
/// unimodular transforms used to build them.
class PolyMatrix {
 public:
  PolyMatrix(const RingContext& ring, std::size_t rows, std::size_t cols)
      : ring_(ring), rows_(rows), cols_(cols), entries_(rows * cols, Poly(ring)) {}
  static PolyMatrix identity(const RingContext& ring, std::size_t n);
  /// Assembles sum_j coeffs[j] D^j; all coefficient matrices share a shape.
  static PolyMatrix from_coefficients(std::span<const ConstantMatrix> coeffs);
  /// entries[i][j] is the degree-ascending coefficient list of entry (i, j).
  static PolyMatrix from_integers(const RingContext& ring,
                                  const std::vector<std::vector<std::vector<std::int64_t>>>& entries,
                                  std::size_t cols_if_empty = 0);

  const RingContext& ring() const noexcept { return ring_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  Poly& at(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const Poly& at(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  /// Maximum entry degree, kZeroDegree for the zero matrix.
  int degree() const noexcept;
  bool is_zero() const noexcept;
  /// Coefficient matrix of D^j.
  ConstantMatrix coefficient(unsigned j) const;

  PolyMatrix operator*(const PolyMatrix& o) const;
  PolyMatrix operator+(const PolyMatrix& o) const;
  PolyMatrix operator-(const PolyMatrix& o) const;
  PolyMatrix scaled(Residue c) const;
  PolyMatrix transpose() const;
  /// Multiplies row i by p^{powers[i]}.
  PolyMatrix rows_scaled_by_p_powers(std::span<const unsigned> powers) const;

  PolyMatrix project() const;
  PolyMatrix lift_to(const RingContext& target) const;

  PolyMatrix row_range(std::size_t first, std::size_t count) const;
  PolyMatrix select_rows(std::span<const std::size_t> rows) const;
  static PolyMatrix vstack(const PolyMatrix& top, const PolyMatrix& bottom);

  void swap_rows(std::size_t a, std::size_t b);
  void swap_cols(std::size_t a, std::size_t b);
  /// row[dst] += f * row[src]
  void add_row_multiple(std::size_t dst, std::size_t src, const Poly& f);
  /// col[dst] += f * col[src]
  void add_col_multiple(std::size_t dst, std::size_t src, const Poly& f);
  void scale_row(std::size_t i, Residue c);

  bool operator==(const PolyMatrix& o) const noexcept {
    return ring_ == o.ring_ && rows_ == o.rows_ && cols_ == o.cols_ && entries_ == o.entries_;
  }

 private:
  RingContext ring_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Poly> entries_;
};

std::ostream& operator<<(std::ostream& os, const PolyMatrix& m);

/// Polynomial vector as a matrix column: w(D) of length n.
using PolyVector = std::vector<Poly>;

}  // namespace convring
