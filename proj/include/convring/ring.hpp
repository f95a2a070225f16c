#pragma once

// Scalar arithmetic in the residue ring Z_{p^r} and its residue field Z_p.

#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

namespace convring {

/// Canonical residue in [0, q).
using Residue = std::uint64_t;

/// Modulus data for Z_{p^r}. Z_p is the special case r = 1.
///
/// q = p^r is required to stay below 2^32 so that products of two residues
/// fit in 64 bits without intermediate reduction.
class RingContext {
 public:
  /// Throws UsageError when p is not prime, r == 0, or p^r does not fit.
  RingContext(std::uint64_t p, unsigned r);

  static RingContext prime_field(std::uint64_t p) { return RingContext(p, 1); }

  std::uint64_t p() const noexcept { return p_; }
  unsigned r() const noexcept { return r_; }
  std::uint64_t q() const noexcept { return q_; }
  bool is_field() const noexcept { return r_ == 1; }

  /// The residue field Z_p of this ring.
  RingContext field() const { return RingContext(p_, 1, p_); }

  Residue reduce(std::int64_t v) const noexcept {
    std::int64_t m = v % static_cast<std::int64_t>(q_);
    return static_cast<Residue>(m < 0 ? m + static_cast<std::int64_t>(q_) : m);
  }
  Residue add(Residue a, Residue b) const noexcept {
    Residue s = a + b;
    return s >= q_ ? s - q_ : s;
  }
  Residue sub(Residue a, Residue b) const noexcept { return a >= b ? a - b : a + q_ - b; }
  Residue neg(Residue a) const noexcept { return a == 0 ? 0 : q_ - a; }
  Residue mul(Residue a, Residue b) const noexcept { return (a * b) % q_; }

  bool is_unit(Residue a) const noexcept { return a % p_ != 0; }
  /// Throws NotAUnit when p divides a.
  Residue inverse(Residue a) const;

  /// p^k reduced mod q (0 once k >= r).
  Residue p_power(unsigned k) const noexcept;
  /// Largest v <= r with p^v | a; r for a == 0.
  unsigned valuation(Residue a) const noexcept;
  /// a / p^k for a divisible by p^k, reduced mod q.
  Residue divide_by_p_power(Residue a, unsigned k) const noexcept;

  /// [a]_p, the projection into Z_p.
  Residue project(Residue a) const noexcept { return a % p_; }

  /// The p-adic digits of a, lowest first, exactly r entries.
  std::vector<unsigned> digits(Residue a) const;
  Residue from_digits(std::span<const unsigned> digits) const;

  bool operator==(const RingContext& o) const noexcept {
    return p_ == o.p_ && r_ == o.r_;
  }

 private:
  RingContext(std::uint64_t p, unsigned r, std::uint64_t q) : p_(p), r_(r), q_(q) {}

  std::uint64_t p_;
  unsigned r_;
  std::uint64_t q_;
};

std::ostream& operator<<(std::ostream& os, const RingContext& ring);

bool is_prime(std::uint64_t n) noexcept;

/// An element of Z_{p^r} bound to its ring. Binary operations between
/// elements of different rings throw UsageError.
class ZqElement {
 public:
  ZqElement(const RingContext& ring, std::int64_t value)
      : ring_(ring), value_(ring.reduce(value)) {}

  const RingContext& ring() const noexcept { return ring_; }
  Residue value() const noexcept { return value_; }

  ZqElement operator+(const ZqElement& o) const;
  ZqElement operator-(const ZqElement& o) const;
  ZqElement operator*(const ZqElement& o) const;
  ZqElement operator-() const { return ZqElement(ring_, ring_.neg(value_), Raw{}); }

  bool is_unit() const noexcept { return ring_.is_unit(value_); }
  /// Throws NotAUnit.
  ZqElement inverse() const { return ZqElement(ring_, ring_.inverse(value_), Raw{}); }
  std::vector<unsigned> digits() const { return ring_.digits(value_); }
  Residue project() const noexcept { return ring_.project(value_); }

  bool operator==(const ZqElement& o) const noexcept {
    return ring_ == o.ring_ && value_ == o.value_;
  }

 private:
  struct Raw {};
  ZqElement(const RingContext& ring, Residue value, Raw) : ring_(ring), value_(value) {}
  void require_same_ring(const ZqElement& o) const;

  RingContext ring_;
  Residue value_;
};

std::ostream& operator<<(std::ostream& os, const ZqElement& a);

/// Smallest s with p^s * v = 0 componentwise; 0 for the zero vector.
unsigned order(const RingContext& ring, std::span<const Residue> v);
unsigned order(std::span<const ZqElement> v);

}  // namespace convring
