#include "convring/matrix.hpp"

#include "convring/errors.hpp"

namespace convring {

ConstantMatrix::ConstantMatrix(const RingContext& ring, std::size_t rows, std::size_t cols,
                               std::vector<Residue> data)
    : ring_(ring), rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) throw UsageError("matrix data size does not match its shape");
  for (auto& x : data_) x %= ring_.q();
}

ConstantMatrix ConstantMatrix::from_rows(const RingContext& ring,
                                         const std::vector<std::vector<std::int64_t>>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  ConstantMatrix m(ring, rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw UsageError("ragged matrix literal");
    for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = ring.reduce(rows[i][j]);
  }
  return m;
}

ConstantMatrix ConstantMatrix::identity(const RingContext& ring, std::size_t n) {
  ConstantMatrix m(ring, n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1 % ring.q();
  return m;
}

std::vector<Residue> ConstantMatrix::column(std::size_t j) const {
  std::vector<Residue> c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = at(i, j);
  return c;
}

ConstantMatrix ConstantMatrix::operator*(const ConstantMatrix& o) const {
  if (!(ring_ == o.ring_)) throw UsageError("matrix product over different rings");
  if (cols_ != o.rows_) throw UsageError("matrix product dimension mismatch");
  ConstantMatrix out(ring_, rows_, o.cols_);
  const Residue q = ring_.q();
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      Residue a = at(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) out.at(i, j) = (out.at(i, j) + a * o.at(k, j)) % q;
    }
  return out;
}

ConstantMatrix ConstantMatrix::operator+(const ConstantMatrix& o) const {
  if (!(ring_ == o.ring_) || rows_ != o.rows_ || cols_ != o.cols_)
    throw UsageError("matrix sum shape or ring mismatch");
  ConstantMatrix out(*this);
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = ring_.add(data_[i], o.data_[i]);
  return out;
}

ConstantMatrix ConstantMatrix::operator-(const ConstantMatrix& o) const {
  if (!(ring_ == o.ring_) || rows_ != o.rows_ || cols_ != o.cols_)
    throw UsageError("matrix difference shape or ring mismatch");
  ConstantMatrix out(*this);
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = ring_.sub(data_[i], o.data_[i]);
  return out;
}

ConstantMatrix ConstantMatrix::scaled(Residue c) const {
  ConstantMatrix out(*this);
  for (auto& x : out.data_) x = ring_.mul(x, c % ring_.q());
  return out;
}

std::vector<Residue> ConstantMatrix::apply(std::span<const Residue> x) const {
  if (x.size() != cols_) throw UsageError("matrix-vector dimension mismatch");
  std::vector<Residue> y(rows_, 0);
  const Residue q = ring_.q();
  for (std::size_t i = 0; i < rows_; ++i) {
    Residue acc = 0;
    for (std::size_t j = 0; j < cols_; ++j) acc = (acc + at(i, j) * (x[j] % q)) % q;
    y[i] = acc;
  }
  return y;
}

ConstantMatrix ConstantMatrix::transpose() const {
  ConstantMatrix out(ring_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out.at(j, i) = at(i, j);
  return out;
}

ConstantMatrix ConstantMatrix::project() const {
  ConstantMatrix out(ring_.field(), rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = ring_.project(data_[i]);
  return out;
}

ConstantMatrix ConstantMatrix::lift_to(const RingContext& target) const {
  if (target.p() != ring_.p()) throw UsageError("lift between rings with different p");
  return ConstantMatrix(target, rows_, cols_, data_);
}

ConstantMatrix ConstantMatrix::select_columns(std::span<const std::size_t> cols) const {
  ConstantMatrix out(ring_, rows_, cols.size());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols.size(); ++k) out.at(i, k) = at(i, cols[k]);
  return out;
}

bool ConstantMatrix::is_zero() const noexcept {
  for (Residue x : data_)
    if (x != 0) return false;
  return true;
}

std::ostream& operator<<(std::ostream& os, const ConstantMatrix& m) {
  os << "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << (i ? "; " : "");
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? " " : "") << m.at(i, j);
  }
  return os << "]";
}

}  // namespace convring
