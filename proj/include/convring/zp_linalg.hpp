#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "convring/matrix.hpp"

namespace convring {

/// Counts multiply-accumulate steps of Z_p eliminations.
struct OpCounter {
  std::uint64_t mac = 0;
};

struct RrefResult {
  ConstantMatrix reduced;
  std::vector<std::size_t> pivots;
};

/// Reduced row echelon form over the field Z_p. Pivots are searched only in
/// the first `pivot_cols` columns (all by default), so trailing columns act as
/// augmented right-hand sides.
RrefResult rref(const ConstantMatrix& a, OpCounter* ops = nullptr,
                std::size_t pivot_cols = static_cast<std::size_t>(-1));
std::size_t rank(const ConstantMatrix& a, OpCounter* ops = nullptr);

/// Affine subspace particular + span(basis) of Z_p^e, or the empty set.
///
/// The basis is stored in reduced row echelon form and the particular point
/// is reduced against it, so equal sets compare equal.
class AffineSet {
 public:
  static AffineSet empty(const RingContext& field, std::size_t dim);
  AffineSet(const RingContext& field, std::vector<Residue> particular,
            std::vector<std::vector<Residue>> basis);

  const RingContext& field() const noexcept { return field_; }
  std::size_t ambient_dim() const noexcept { return dim_; }
  bool feasible() const noexcept { return feasible_; }
  const std::vector<Residue>& particular() const noexcept { return particular_; }
  const std::vector<std::vector<Residue>>& basis() const noexcept { return basis_; }
  /// log_p of the number of points; meaningless when infeasible.
  std::size_t dimension() const noexcept { return basis_.size(); }

  bool contains(std::span<const Residue> x) const;
  /// Visits every point; returns false if the callback stopped early.
  bool for_each(const std::function<bool(const std::vector<Residue>&)>& visit) const;

  bool operator==(const AffineSet& o) const noexcept {
    return field_ == o.field_ && dim_ == o.dim_ && feasible_ == o.feasible_ &&
           particular_ == o.particular_ && basis_ == o.basis_;
  }

 private:
  AffineSet(const RingContext& field, std::size_t dim) : field_(field), dim_(dim), feasible_(false) {}

  RingContext field_;
  std::size_t dim_;
  bool feasible_;
  std::vector<Residue> particular_;
  std::vector<std::vector<Residue>> basis_;
};

/// Solution set of A x = b over Z_p.
AffineSet solve_affine_zp(const ConstantMatrix& a, std::span<const Residue> b,
                          OpCounter* ops = nullptr);

/// Full column rank of [A]_p, the uniqueness criterion for A x = b over Z_{p^r}.
bool mccoy_unique(const ConstantMatrix& a);

}  // namespace convring
