#include "convring/zq_linalg.hpp"

#include "convring/errors.hpp"

namespace convring {

ZqSmith smith_zq(const ConstantMatrix& a) {
  const RingContext& ring = a.ring();
  const std::size_t m = a.rows(), n = a.cols();
  ConstantMatrix w = a;
  ConstantMatrix u = ConstantMatrix::identity(ring, m);
  ConstantMatrix u_inv = ConstantMatrix::identity(ring, m);
  ConstantMatrix v = ConstantMatrix::identity(ring, n);
  std::vector<unsigned> vals;

  auto swap_rows = [&](std::size_t x, std::size_t y) {
    if (x == y) return;
    for (std::size_t j = 0; j < n; ++j) std::swap(w.at(x, j), w.at(y, j));
    for (std::size_t j = 0; j < m; ++j) std::swap(u.at(x, j), u.at(y, j));
    for (std::size_t i = 0; i < m; ++i) std::swap(u_inv.at(i, x), u_inv.at(i, y));
  };
  auto swap_cols = [&](std::size_t x, std::size_t y) {
    if (x == y) return;
    for (std::size_t i = 0; i < m; ++i) std::swap(w.at(i, x), w.at(i, y));
    for (std::size_t i = 0; i < n; ++i) std::swap(v.at(i, x), v.at(i, y));
  };

  for (std::size_t k = 0; k < std::min(m, n); ++k) {
    unsigned best = ring.r();
    std::size_t bi = k, bj = k;
    for (std::size_t i = k; i < m && best > 0; ++i)
      for (std::size_t j = k; j < n; ++j) {
        const unsigned val = ring.valuation(w.at(i, j));
        if (val < best) {
          best = val, bi = i, bj = j;
          if (val == 0) break;
        }
      }
    if (best == ring.r()) break;
    swap_rows(k, bi);
    swap_cols(k, bj);
    // Pivot is p^best * unit; normalize the unit away.
    const Residue unit = ring.divide_by_p_power(w.at(k, k), best);
    const Residue unit_inv = ring.inverse(unit);
    for (std::size_t j = 0; j < n; ++j) w.at(k, j) = ring.mul(w.at(k, j), unit_inv);
    for (std::size_t j = 0; j < m; ++j) u.at(k, j) = ring.mul(u.at(k, j), unit_inv);
    for (std::size_t i = 0; i < m; ++i) u_inv.at(i, k) = ring.mul(u_inv.at(i, k), unit);
    for (std::size_t i = 0; i < m; ++i) {
      if (i == k || w.at(i, k) == 0) continue;
      const Residue c = ring.divide_by_p_power(w.at(i, k), best);
      for (std::size_t j = 0; j < n; ++j) w.at(i, j) = ring.sub(w.at(i, j), ring.mul(c, w.at(k, j)));
      for (std::size_t j = 0; j < m; ++j) u.at(i, j) = ring.sub(u.at(i, j), ring.mul(c, u.at(k, j)));
      for (std::size_t t = 0; t < m; ++t)
        u_inv.at(t, k) = ring.add(u_inv.at(t, k), ring.mul(c, u_inv.at(t, i)));
    }
    for (std::size_t j = k + 1; j < n; ++j) {
      if (w.at(k, j) == 0) continue;
      const Residue c = ring.divide_by_p_power(w.at(k, j), best);
      for (std::size_t i = 0; i < m; ++i) w.at(i, j) = ring.sub(w.at(i, j), ring.mul(c, w.at(i, k)));
      for (std::size_t i = 0; i < n; ++i) v.at(i, j) = ring.sub(v.at(i, j), ring.mul(c, v.at(i, k)));
    }
    vals.push_back(best);
  }
  return {std::move(u), std::move(u_inv), std::move(v), std::move(vals)};
}

ZqCoset solve_zq(const ConstantMatrix& a, std::span<const Residue> b) {
  if (b.size() != a.rows()) throw UsageError("right-hand side length does not match the matrix");
  const RingContext& ring = a.ring();
  const std::size_t n = a.cols();
  ZqSmith s = smith_zq(a);
  const std::vector<Residue> c = s.u.apply(b);
  const std::size_t rk = s.valuations.size();
  ZqCoset out;
  for (std::size_t i = rk; i < c.size(); ++i)
    if (c[i] != 0) return out;
  std::vector<Residue> y(n, 0);
  for (std::size_t i = 0; i < rk; ++i) {
    if (ring.valuation(c[i]) < s.valuations[i]) return out;
    y[i] = ring.divide_by_p_power(c[i], s.valuations[i]);
  }
  out.feasible = true;
  out.base = s.v.apply(y);
  for (std::size_t j = 0; j < n; ++j) {
    const unsigned vj = j < rk ? s.valuations[j] : ring.r();
    if (vj == 0) continue;
    std::vector<Residue> g = s.v.column(j);
    const Residue scale = ring.p_power(ring.r() - vj);
    for (auto& x : g) x = ring.mul(x, scale);
    out.generators.push_back(std::move(g));
    out.log_orders.push_back(vj);
  }
  return out;
}

ZqCoset column_module(const ConstantMatrix& g) {
  const RingContext& ring = g.ring();
  ZqSmith s = smith_zq(g);
  ZqCoset out;
  out.feasible = true;
  out.base.assign(g.rows(), 0);
  for (std::size_t i = 0; i < s.valuations.size(); ++i) {
    std::vector<Residue> col = s.u_inv.column(i);
    const Residue scale = ring.p_power(s.valuations[i]);
    for (auto& x : col) x = ring.mul(x, scale);
    out.generators.push_back(std::move(col));
    out.log_orders.push_back(ring.r() - s.valuations[i]);
  }
  return out;
}

}  // namespace convring
