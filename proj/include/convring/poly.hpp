#pragma once

#include <climits>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "convring/ring.hpp"

namespace convring {

/// Degree reported for the zero polynomial.
inline constexpr int kZeroDegree = INT_MIN;

/// Polynomial in D over Z_{p^r}, coefficients lowest degree first, with no
/// trailing zero coefficient.
class Poly {
 public:
  explicit Poly(const RingContext& ring) : ring_(ring) {}
  Poly(const RingContext& ring, std::vector<Residue> coeffs);
  /// Coefficients given as arbitrary integers; each is reduced mod q.
  static Poly from_integers(const RingContext& ring, std::span<const std::int64_t> coeffs);
  static Poly constant(const RingContext& ring, Residue c);
  static Poly monomial(const RingContext& ring, Residue c, unsigned degree);

  const RingContext& ring() const noexcept { return ring_; }
  int degree() const noexcept {
    return coeffs_.empty() ? kZeroDegree : static_cast<int>(coeffs_.size()) - 1;
  }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  bool is_constant() const noexcept { return coeffs_.size() <= 1; }
  Residue coeff(std::size_t i) const noexcept { return i < coeffs_.size() ? coeffs_[i] : 0; }
  const std::vector<Residue>& coeffs() const noexcept { return coeffs_; }
  Residue lead() const noexcept { return coeffs_.empty() ? 0 : coeffs_.back(); }
  /// Minimum p-adic valuation over coefficients; r for zero.
  unsigned valuation() const noexcept;

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator-() const;
  Poly scaled(Residue c) const;
  Poly& operator+=(const Poly& o) { return *this = *this + o; }
  Poly& operator-=(const Poly& o) { return *this = *this - o; }

  /// Quotient and remainder; the divisor needs a unit leading coefficient.
  std::pair<Poly, Poly> divmod(const Poly& divisor) const;
  bool divides(const Poly& other) const;
  /// Divides every coefficient by p^k; all coefficients must be divisible.
  Poly divided_by_p_power(unsigned k) const;

  /// Coefficientwise [.]_p, landing in Z_p.
  Poly project() const;
  /// Same digit-level integers read in another ring with the same p.
  Poly lift_to(const RingContext& target) const;
  /// Scale to a monic polynomial (field coefficients, or unit leading term).
  Poly monic() const;

  bool operator==(const Poly& o) const noexcept {
    return ring_ == o.ring_ && coeffs_ == o.coeffs_;
  }

 private:
  void trim();

  RingContext ring_;
  std::vector<Residue> coeffs_;
};

std::ostream& operator<<(std::ostream& os, const Poly& f);

/// Monic gcd over the prime field Z_p.
Poly gcd(const Poly& a, const Poly& b);

}  // namespace convring
