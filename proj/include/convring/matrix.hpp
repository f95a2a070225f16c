#pragma once

#include <ostream>
#include <span>
#include <vector>

#include "convring/ring.hpp"

namespace convring {

/// Dense row-major matrix with entries in Z_{p^r} (or Z_p when r = 1).
class ConstantMatrix {
 public:
  ConstantMatrix(const RingContext& ring, std::size_t rows, std::size_t cols)
      : ring_(ring), rows_(rows), cols_(cols), data_(rows * cols, 0) {}
  ConstantMatrix(const RingContext& ring, std::size_t rows, std::size_t cols,
                 std::vector<Residue> data);
  /// Row-major integer literal; entries reduced mod q.
  static ConstantMatrix from_rows(const RingContext& ring,
                                  const std::vector<std::vector<std::int64_t>>& rows);
  static ConstantMatrix identity(const RingContext& ring, std::size_t n);

  const RingContext& ring() const noexcept { return ring_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Residue& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  Residue at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  std::span<const Residue> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::span<Residue> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::vector<Residue> column(std::size_t j) const;
  const std::vector<Residue>& data() const noexcept { return data_; }

  ConstantMatrix operator*(const ConstantMatrix& o) const;
  ConstantMatrix operator+(const ConstantMatrix& o) const;
  ConstantMatrix operator-(const ConstantMatrix& o) const;
  ConstantMatrix scaled(Residue c) const;
  std::vector<Residue> apply(std::span<const Residue> x) const;
  ConstantMatrix transpose() const;

  /// Entrywise [.]_p.
  ConstantMatrix project() const;
  ConstantMatrix lift_to(const RingContext& target) const;
  ConstantMatrix select_columns(std::span<const std::size_t> cols) const;

  bool is_zero() const noexcept;
  bool operator==(const ConstantMatrix& o) const noexcept {
    return ring_ == o.ring_ && rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

 private:
  RingContext ring_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Residue> data_;
};

std::ostream& operator<<(std::ostream& os, const ConstantMatrix& m);

}  // namespace convring
