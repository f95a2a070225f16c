#include "convring/poly.hpp"

#include <algorithm>

#include "convring/errors.hpp"

namespace convring {

Poly::Poly(const RingContext& ring, std::vector<Residue> coeffs) : ring_(ring), coeffs_(std::move(coeffs)) {
  for (auto& c : coeffs_) c %= ring_.q();
  trim();
}

Poly Poly::from_integers(const RingContext& ring, std::span<const std::int64_t> coeffs) {
  std::vector<Residue> c;
  c.reserve(coeffs.size());
  for (auto v : coeffs) c.push_back(ring.reduce(v));
  return Poly(ring, std::move(c));
}

Poly Poly::constant(const RingContext& ring, Residue c) { return Poly(ring, std::vector<Residue>{c}); }

Poly Poly::monomial(const RingContext& ring, Residue c, unsigned degree) {
  std::vector<Residue> v(degree + 1, 0);
  v[degree] = c;
  return Poly(ring, std::move(v));
}

void Poly::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

unsigned Poly::valuation() const noexcept {
  unsigned v = ring_.r();
  for (Residue c : coeffs_) v = std::min(v, ring_.valuation(c));
  return v;
}

static void require_same(const Poly& a, const Poly& b) {
  if (!(a.ring() == b.ring())) throw UsageError("polynomials over different rings");
}

Poly Poly::operator+(const Poly& o) const {
  require_same(*this, o);
  std::vector<Residue> out(std::max(coeffs_.size(), o.coeffs_.size()), 0);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = ring_.add(coeff(i), o.coeff(i));
  return Poly(ring_, std::move(out));
}

Poly Poly::operator-(const Poly& o) const {
  require_same(*this, o);
  std::vector<Residue> out(std::max(coeffs_.size(), o.coeffs_.size()), 0);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = ring_.sub(coeff(i), o.coeff(i));
  return Poly(ring_, std::move(out));
}

Poly Poly::operator*(const Poly& o) const {
  require_same(*this, o);
  if (is_zero() || o.is_zero()) return Poly(ring_);
  std::vector<Residue> out(coeffs_.size() + o.coeffs_.size() - 1, 0);
  const Residue q = ring_.q();
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0) continue;
    for (std::size_t j = 0; j < o.coeffs_.size(); ++j)
      out[i + j] = (out[i + j] + coeffs_[i] * o.coeffs_[j]) % q;
  }
  return Poly(ring_, std::move(out));
}

Poly Poly::operator-() const {
  std::vector<Residue> out(coeffs_);
  for (auto& c : out) c = ring_.neg(c);
  return Poly(ring_, std::move(out));
}

Poly Poly::scaled(Residue c) const {
  std::vector<Residue> out(coeffs_);
  for (auto& x : out) x = ring_.mul(x, c % ring_.q());
  return Poly(ring_, std::move(out));
}

std::pair<Poly, Poly> Poly::divmod(const Poly& divisor) const {
  require_same(*this, divisor);
  if (divisor.is_zero()) throw UsageError("polynomial division by zero");
  if (!ring_.is_unit(divisor.lead()))
    throw UsageError("polynomial division needs a unit leading coefficient");
  const Residue inv = ring_.inverse(divisor.lead());
  std::vector<Residue> rem(coeffs_);
  const int dd = divisor.degree();
  if (degree() < dd) return {Poly(ring_), *this};
  std::vector<Residue> quot(static_cast<std::size_t>(degree() - dd + 1), 0);
  for (int i = degree(); i >= dd; --i) {
    Residue c = rem[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    Residue f = ring_.mul(c, inv);
    quot[static_cast<std::size_t>(i - dd)] = f;
    for (int j = 0; j <= dd; ++j) {
      auto idx = static_cast<std::size_t>(i - dd + j);
      rem[idx] = ring_.sub(rem[idx], ring_.mul(f, divisor.coeffs_[static_cast<std::size_t>(j)]));
    }
  }
  return {Poly(ring_, std::move(quot)), Poly(ring_, std::move(rem))};
}

bool Poly::divides(const Poly& other) const {
  if (is_zero()) return other.is_zero();
  return other.divmod(*this).second.is_zero();
}

Poly Poly::divided_by_p_power(unsigned k) const {
  std::vector<Residue> out(coeffs_);
  const Residue pk = ring_.p_power(k);
  for (auto& c : out) {
    if (k >= ring_.r() ? c != 0 : c % pk != 0)
      throw UsageError("coefficient not divisible by the requested power of p");
    c = ring_.divide_by_p_power(c, k);
  }
  return Poly(ring_, std::move(out));
}

Poly Poly::project() const {
  RingContext field = ring_.field();
  std::vector<Residue> out(coeffs_);
  for (auto& c : out) c = ring_.project(c);
  return Poly(field, std::move(out));
}

Poly Poly::lift_to(const RingContext& target) const {
  if (target.p() != ring_.p()) throw UsageError("lift between rings with different p");
  return Poly(target, coeffs_);
}

Poly Poly::monic() const {
  if (is_zero()) return *this;
  return scaled(ring_.inverse(lead()));
}

Poly gcd(const Poly& a, const Poly& b) {
  if (!a.ring().is_field()) throw UsageError("gcd is defined here over Z_p only");
  Poly x = a, y = b;
  while (!y.is_zero()) {
    Poly rem = x.divmod(y).second;
    x = std::move(y);
    y = std::move(rem);
  }
  return x.monic();
}

std::ostream& operator<<(std::ostream& os, const Poly& f) {
  if (f.is_zero()) return os << "0";
  bool first = true;
  for (std::size_t i = 0; i < f.coeffs().size(); ++i) {
    Residue c = f.coeffs()[i];
    if (c == 0) continue;
    if (!first) os << " + ";
    first = false;
    if (i == 0) {
      os << c;
    } else {
      if (c != 1) os << c;
      os << "D";
      if (i > 1) os << "^" << i;
    }
  }
  return os;
}

}  // namespace convring
