#include "convring/poly_matrix.hpp"

#include <algorithm>

#include "convring/errors.hpp"

namespace convring {

PolyMatrix PolyMatrix::identity(const RingContext& ring, std::size_t n) {
  PolyMatrix m(ring, n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = Poly::constant(ring, 1);
  return m;
}

PolyMatrix PolyMatrix::from_coefficients(std::span<const ConstantMatrix> coeffs) {
  if (coeffs.empty()) throw UsageError("need at least one coefficient matrix");
  const auto& first = coeffs.front();
  PolyMatrix m(first.ring(), first.rows(), first.cols());
  for (std::size_t i = 0; i < first.rows(); ++i)
    for (std::size_t j = 0; j < first.cols(); ++j) {
      std::vector<Residue> c(coeffs.size());
      for (std::size_t d = 0; d < coeffs.size(); ++d) {
        if (coeffs[d].rows() != first.rows() || coeffs[d].cols() != first.cols())
          throw UsageError("coefficient matrices differ in shape");
        c[d] = coeffs[d].at(i, j);
      }
      m.at(i, j) = Poly(first.ring(), std::move(c));
    }
  return m;
}

PolyMatrix PolyMatrix::from_integers(const RingContext& ring,
                                     const std::vector<std::vector<std::vector<std::int64_t>>>& entries,
                                     std::size_t cols_if_empty) {
  const std::size_t cols = entries.empty() ? cols_if_empty : entries.front().size();
  PolyMatrix m(ring, entries.size(), cols);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].size() != cols) throw UsageError("ragged polynomial matrix literal");
    for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = Poly::from_integers(ring, entries[i][j]);
  }
  return m;
}

int PolyMatrix::degree() const noexcept {
  int d = kZeroDegree;
  for (const auto& e : entries_) d = std::max(d, e.degree());
  return d;
}

bool PolyMatrix::is_zero() const noexcept {
  return std::all_of(entries_.begin(), entries_.end(), [](const Poly& f) { return f.is_zero(); });
}

ConstantMatrix PolyMatrix::coefficient(unsigned j) const {
  ConstantMatrix c(ring_, rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) c.at(i, k) = at(i, k).coeff(j);
  return c;
}

PolyMatrix PolyMatrix::operator*(const PolyMatrix& o) const {
  if (!(ring_ == o.ring_)) throw UsageError("polynomial matrix product over different rings");
  if (cols_ != o.rows_) throw UsageError("polynomial matrix product dimension mismatch");
  PolyMatrix out(ring_, rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Poly& a = at(i, k);
      if (a.is_zero()) continue;
      for (std::size_t j = 0; j < o.cols_; ++j)
        if (!o.at(k, j).is_zero()) out.at(i, j) += a * o.at(k, j);
    }
  return out;
}

PolyMatrix PolyMatrix::operator+(const PolyMatrix& o) const {
  if (!(ring_ == o.ring_) || rows_ != o.rows_ || cols_ != o.cols_)
    throw UsageError("polynomial matrix sum shape or ring mismatch");
  PolyMatrix out(*this);
  for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] += o.entries_[i];
  return out;
}

PolyMatrix PolyMatrix::operator-(const PolyMatrix& o) const {
  if (!(ring_ == o.ring_) || rows_ != o.rows_ || cols_ != o.cols_)
    throw UsageError("polynomial matrix difference shape or ring mismatch");
  PolyMatrix out(*this);
  for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] -= o.entries_[i];
  return out;
}

PolyMatrix PolyMatrix::scaled(Residue c) const {
  PolyMatrix out(*this);
  for (auto& e : out.entries_) e = e.scaled(c);
  return out;
}

PolyMatrix PolyMatrix::transpose() const {
  PolyMatrix out(ring_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out.at(j, i) = at(i, j);
  return out;
}

PolyMatrix PolyMatrix::rows_scaled_by_p_powers(std::span<const unsigned> powers) const {
  if (powers.size() != rows_) throw UsageError("one p-power per row expected");
  PolyMatrix out(*this);
  for (std::size_t i = 0; i < rows_; ++i) out.scale_row(i, ring_.p_power(powers[i]));
  return out;
}

PolyMatrix PolyMatrix::project() const {
  PolyMatrix out(ring_.field(), rows_, cols_);
  for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] = entries_[i].project();
  return out;
}

PolyMatrix PolyMatrix::lift_to(const RingContext& target) const {
  PolyMatrix out(target, rows_, cols_);
  for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] = entries_[i].lift_to(target);
  return out;
}

PolyMatrix PolyMatrix::row_range(std::size_t first, std::size_t count) const {
  if (first + count > rows_) throw UsageError("row range out of bounds");
  PolyMatrix out(ring_, count, cols_);
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out.at(i, j) = at(first + i, j);
  return out;
}

PolyMatrix PolyMatrix::select_rows(std::span<const std::size_t> rows) const {
  PolyMatrix out(ring_, rows.size(), cols_);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols_; ++j) out.at(i, j) = at(rows[i], j);
  return out;
}

PolyMatrix PolyMatrix::vstack(const PolyMatrix& top, const PolyMatrix& bottom) {
  if (!(top.ring_ == bottom.ring_) || top.cols_ != bottom.cols_)
    throw UsageError("vstack shape or ring mismatch");
  PolyMatrix out(top.ring_, top.rows_ + bottom.rows_, top.cols_);
  std::copy(top.entries_.begin(), top.entries_.end(), out.entries_.begin());
  std::copy(bottom.entries_.begin(), bottom.entries_.end(),
            out.entries_.begin() + static_cast<std::ptrdiff_t>(top.entries_.size()));
  return out;
}

void PolyMatrix::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t j = 0; j < cols_; ++j) std::swap(at(a, j), at(b, j));
}

void PolyMatrix::swap_cols(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t i = 0; i < rows_; ++i) std::swap(at(i, a), at(i, b));
}

void PolyMatrix::add_row_multiple(std::size_t dst, std::size_t src, const Poly& f) {
  if (f.is_zero()) return;
  for (std::size_t j = 0; j < cols_; ++j)
    if (!at(src, j).is_zero()) at(dst, j) += f * at(src, j);
}

void PolyMatrix::add_col_multiple(std::size_t dst, std::size_t src, const Poly& f) {
  if (f.is_zero()) return;
  for (std::size_t i = 0; i < rows_; ++i)
    if (!at(i, src).is_zero()) at(i, dst) += f * at(i, src);
}

void PolyMatrix::scale_row(std::size_t i, Residue c) {
  for (std::size_t j = 0; j < cols_; ++j) at(i, j) = at(i, j).scaled(c);
}

std::ostream& operator<<(std::ostream& os, const PolyMatrix& m) {
  os << "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << (i ? "; " : "");
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << m.at(i, j);
  }
  return os << "]";
}

}  // namespace convring
