#include "convring/ring.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "convring/errors.hpp"

namespace convring {

bool is_prime(std::uint64_t n) noexcept {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

RingContext::RingContext(std::uint64_t p, unsigned r) : p_(p), r_(r), q_(1) {
  if (!is_prime(p)) throw UsageError("modulus base " + std::to_string(p) + " is not prime");
  if (r == 0) throw UsageError("ring exponent r must be at least 1");
  constexpr std::uint64_t kLimit = std::uint64_t{1} << 32;
  for (unsigned i = 0; i < r; ++i) {
    if (q_ > (kLimit - 1) / p) throw UsageError("p^r does not fit below 2^32");
    q_ *= p;
  }
}

Residue RingContext::inverse(Residue a) const {
  a %= q_;
  if (!is_unit(a)) throw NotAUnit(std::to_string(a) + " is not a unit modulo " + std::to_string(q_));
  std::int64_t old_r = static_cast<std::int64_t>(a), rr = static_cast<std::int64_t>(q_);
  std::int64_t old_s = 1, s = 0;
  while (rr != 0) {
    std::int64_t quot = old_r / rr;
    std::int64_t tmp = old_r - quot * rr;
    old_r = rr;
    rr = tmp;
    tmp = old_s - quot * s;
    old_s = s;
    s = tmp;
  }
  return reduce(old_s);
}

Residue RingContext::p_power(unsigned k) const noexcept {
  if (k >= r_) return 0;
  Residue v = 1;
  for (unsigned i = 0; i < k; ++i) v *= p_;
  return v;
}

unsigned RingContext::valuation(Residue a) const noexcept {
  a %= q_;
  if (a == 0) return r_;
  unsigned v = 0;
  while (a % p_ == 0) {
    a /= p_;
    ++v;
  }
  return v;
}

Residue RingContext::divide_by_p_power(Residue a, unsigned k) const noexcept {
  for (unsigned i = 0; i < k; ++i) a /= p_;
  return a % q_;
}

std::vector<unsigned> RingContext::digits(Residue a) const {
  std::vector<unsigned> out(r_);
  a %= q_;
  for (unsigned i = 0; i < r_; ++i) {
    out[i] = static_cast<unsigned>(a % p_);
    a /= p_;
  }
  return out;
}

Residue RingContext::from_digits(std::span<const unsigned> digits) const {
  Residue v = 0;
  for (std::size_t i = digits.size(); i-- > 0;) v = (v * p_ + digits[i]) % q_;
  return v;
}

std::ostream& operator<<(std::ostream& os, const RingContext& ring) {
  return os << "Z_" << ring.q() << " (p=" << ring.p() << ", r=" << ring.r() << ")";
}

void ZqElement::require_same_ring(const ZqElement& o) const {
  if (!(ring_ == o.ring_)) throw UsageError("operands belong to different rings");
}

ZqElement ZqElement::operator+(const ZqElement& o) const {
  require_same_ring(o);
  return ZqElement(ring_, ring_.add(value_, o.value_), Raw{});
}

ZqElement ZqElement::operator-(const ZqElement& o) const {
  require_same_ring(o);
  return ZqElement(ring_, ring_.sub(value_, o.value_), Raw{});
}

ZqElement ZqElement::operator*(const ZqElement& o) const {
  require_same_ring(o);
  return ZqElement(ring_, ring_.mul(value_, o.value_), Raw{});
}

std::ostream& operator<<(std::ostream& os, const ZqElement& a) { return os << a.value(); }

unsigned order(const RingContext& ring, std::span<const Residue> v) {
  unsigned min_val = ring.r();
  for (Residue x : v) min_val = std::min(min_val, ring.valuation(x));
  return ring.r() - min_val;
}

unsigned order(std::span<const ZqElement> v) {
  if (v.empty()) return 0;
  std::vector<Residue> raw;
  raw.reserve(v.size());
  for (const auto& x : v) {
    if (!(x.ring() == v.front().ring())) throw UsageError("vector mixes rings");
    raw.push_back(x.value());
  }
  return order(v.front().ring(), raw);
}

}  // namespace convring
