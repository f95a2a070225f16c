#include "convring/zp_linalg.hpp"

#include <algorithm>

#include "convring/errors.hpp"

namespace convring {

RrefResult rref(const ConstantMatrix& a, OpCounter* ops, std::size_t pivot_cols) {
  if (!a.ring().is_field()) throw UsageError("rref needs a matrix over Z_p");
  const RingContext& f = a.ring();
  ConstantMatrix m = a;
  std::vector<std::size_t> pivots;
  const std::size_t rows = m.rows(), cols = m.cols();
  pivot_cols = std::min(pivot_cols, cols);
  std::uint64_t count = 0;
  std::size_t row = 0;
  for (std::size_t c = 0; c < pivot_cols && row < rows; ++c) {
    std::size_t sel = row;
    while (sel < rows && m.at(sel, c) == 0) ++sel;
    if (sel == rows) continue;
    if (sel != row)
      for (std::size_t j = 0; j < cols; ++j) std::swap(m.at(sel, j), m.at(row, j));
    const Residue inv = f.inverse(m.at(row, c));
    if (inv != 1)
      for (std::size_t j = c; j < cols; ++j) m.at(row, j) = f.mul(m.at(row, j), inv);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == row) continue;
      const Residue factor = m.at(i, c);
      if (factor == 0) continue;
      for (std::size_t j = c; j < cols; ++j)
        m.at(i, j) = f.sub(m.at(i, j), f.mul(factor, m.at(row, j)));
      count += cols - c;
    }
    pivots.push_back(c);
    ++row;
  }
  if (ops) ops->mac += count;
  return {std::move(m), std::move(pivots)};
}

std::size_t rank(const ConstantMatrix& a, OpCounter* ops) { return rref(a, ops).pivots.size(); }

AffineSet AffineSet::empty(const RingContext& field, std::size_t dim) { return AffineSet(field, dim); }

AffineSet::AffineSet(const RingContext& field, std::vector<Residue> particular,
                     std::vector<std::vector<Residue>> basis)
    : field_(field), dim_(particular.size()), feasible_(true), particular_(std::move(particular)) {
  if (!field_.is_field()) throw UsageError("affine sets live over Z_p");
  for (auto& x : particular_) x %= field_.p();
  if (!basis.empty()) {
    ConstantMatrix b(field_, basis.size(), dim_);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      if (basis[i].size() != dim_) throw UsageError("basis vector has the wrong length");
      for (std::size_t j = 0; j < dim_; ++j) b.at(i, j) = basis[i][j] % field_.p();
    }
    auto [red, piv] = rref(b);
    for (std::size_t i = 0; i < piv.size(); ++i) {
      auto row = red.row(i);
      basis_.emplace_back(row.begin(), row.end());
      const Residue c = particular_[piv[i]];
      if (c != 0)
        for (std::size_t j = 0; j < dim_; ++j)
          particular_[j] = field_.sub(particular_[j], field_.mul(c, row[j]));
    }
  }
}

bool AffineSet::contains(std::span<const Residue> x) const {
  if (!feasible_ || x.size() != dim_) return false;
  std::vector<Residue> d(dim_);
  for (std::size_t j = 0; j < dim_; ++j) d[j] = field_.sub(x[j] % field_.p(), particular_[j]);
  // Basis is in RREF: peel off each pivot coordinate.
  for (const auto& b : basis_) {
    std::size_t pc = 0;
    while (b[pc] == 0) ++pc;
    const Residue c = d[pc];
    if (c != 0)
      for (std::size_t j = 0; j < dim_; ++j) d[j] = field_.sub(d[j], field_.mul(c, b[j]));
  }
  return std::all_of(d.begin(), d.end(), [](Residue v) { return v == 0; });
}

bool AffineSet::for_each(const std::function<bool(const std::vector<Residue>&)>& visit) const {
  if (!feasible_) return true;
  const std::size_t m = basis_.size();
  std::vector<Residue> coeff(m, 0);
  std::vector<Residue> point;
  for (;;) {
    point = particular_;
    for (std::size_t i = 0; i < m; ++i)
      if (coeff[i] != 0)
        for (std::size_t j = 0; j < dim_; ++j)
          point[j] = field_.add(point[j], field_.mul(coeff[i], basis_[i][j]));
    if (!visit(point)) return false;
    std::size_t i = 0;
    while (i < m && ++coeff[i] == field_.p()) coeff[i++] = 0;
    if (i == m) return true;
  }
}

AffineSet solve_affine_zp(const ConstantMatrix& a, std::span<const Residue> b, OpCounter* ops) {
  const RingContext& f = a.ring();
  if (b.size() != a.rows()) throw UsageError("right-hand side length does not match the matrix");
  const std::size_t e = a.cols();
  ConstantMatrix aug(f, a.rows(), e + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < e; ++j) aug.at(i, j) = a.at(i, j);
    aug.at(i, e) = b[i] % f.p();
  }
  auto [red, piv] = rref(aug, ops, e);
  for (std::size_t i = piv.size(); i < red.rows(); ++i)
    if (red.at(i, e) != 0) return AffineSet::empty(f, e);
  std::vector<Residue> particular(e, 0);
  std::vector<bool> is_pivot(e, false);
  for (std::size_t i = 0; i < piv.size(); ++i) {
    particular[piv[i]] = red.at(i, e);
    is_pivot[piv[i]] = true;
  }
  std::vector<std::vector<Residue>> basis;
  for (std::size_t fc = 0; fc < e; ++fc) {
    if (is_pivot[fc]) continue;
    std::vector<Residue> v(e, 0);
    v[fc] = 1;
    for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = f.neg(red.at(i, fc));
    basis.push_back(std::move(v));
  }
  return AffineSet(f, std::move(particular), std::move(basis));
}

bool mccoy_unique(const ConstantMatrix& a) { return rank(a.project()) == a.cols(); }

}  // namespace convring
