#include "convring/polynomial_forms.hpp"

#include <bit>

#include "convring/errors.hpp"

namespace convring {

SmithForm smith_form(const PolyMatrix& a) {
  if (!a.ring().is_field()) throw UsageError("smith_form needs a matrix over Z_p");
  const RingContext& f = a.ring();
  const std::size_t m = a.rows(), n = a.cols();
  PolyMatrix s = a;
  PolyMatrix u = PolyMatrix::identity(f, m);
  PolyMatrix v = PolyMatrix::identity(f, n);
  PolyMatrix v_inv = PolyMatrix::identity(f, n);
  const Poly one = Poly::constant(f, 1);

  auto row_op = [&](std::size_t dst, std::size_t src, const Poly& q) {
    s.add_row_multiple(dst, src, q);
    u.add_row_multiple(dst, src, q);
  };
  auto col_op = [&](std::size_t dst, std::size_t src, const Poly& q) {
    s.add_col_multiple(dst, src, q);
    v.add_col_multiple(dst, src, q);
    v_inv.add_row_multiple(src, dst, -q);
  };

  std::vector<Poly> factors;
  const std::size_t steps = std::min(m, n);
  for (std::size_t t = 0; t < steps; ++t) {
    for (;;) {
      int best = INT_MAX;
      std::size_t bi = t, bj = t;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j) {
          const Poly& e = s.at(i, j);
          if (!e.is_zero() && e.degree() < best) best = e.degree(), bi = i, bj = j;
        }
      if (best == INT_MAX) break;
      if (bi != t) {
        s.swap_rows(t, bi);
        u.swap_rows(t, bi);
      }
      if (bj != t) {
        s.swap_cols(t, bj);
        v.swap_cols(t, bj);
        v_inv.swap_rows(t, bj);
      }
      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (s.at(i, t).is_zero()) continue;
        auto [q, rem] = s.at(i, t).divmod(s.at(t, t));
        row_op(i, t, -q);
        if (!rem.is_zero()) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (s.at(t, j).is_zero()) continue;
        auto [q, rem] = s.at(t, j).divmod(s.at(t, t));
        col_op(j, t, -q);
        if (!rem.is_zero()) clean = false;
      }
      if (!clean) continue;
      bool divides_all = true;
      for (std::size_t i = t + 1; i < m && divides_all; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (!s.at(t, t).divides(s.at(i, j))) {
            row_op(t, i, one);
            divides_all = false;
            break;
          }
      if (!divides_all) continue;
      const Residue inv = f.inverse(s.at(t, t).lead());
      s.scale_row(t, inv);
      u.scale_row(t, inv);
      break;
    }
    factors.push_back(s.at(t, t));
  }
  return {std::move(u), std::move(s), std::move(v), std::move(v_inv), std::move(factors)};
}

static bool all_unit_factors(const SmithForm& sf) {
  for (const auto& g : sf.factors)
    if (g.degree() != 0) return false;
  return true;
}

bool is_left_prime(const PolyMatrix& a) {
  if (a.rows() > a.cols()) throw UsageError("left primeness needs rows <= cols");
  return all_unit_factors(smith_form(a));
}

PolyMatrix unimodular_complete(const PolyMatrix& a) {
  if (a.rows() > a.cols()) throw UsageError("completion needs rows <= cols");
  SmithForm sf = smith_form(a);
  if (!all_unit_factors(sf)) throw NotLeftPrime("matrix is not left prime over Z_p[D]");
  return sf.v_inv.row_range(a.rows(), a.cols() - a.rows());
}

PolyMatrix nonsingular_complete(const PolyMatrix& a) {
  if (a.rows() > a.cols()) throw UsageError("completion needs rows <= cols");
  SmithForm sf = smith_form(a);
  for (const auto& g : sf.factors)
    if (g.is_zero()) throw ConstructionError("matrix is not of full row rank over Z_p[D]");
  return sf.v_inv.row_range(a.rows(), a.cols() - a.rows());
}

PolyMatrix inverse_zp(const PolyMatrix& a) {
  if (a.rows() != a.cols()) throw NotUnimodular("only square matrices can be unimodular");
  SmithForm sf = smith_form(a);
  if (!all_unit_factors(sf)) throw NotUnimodular("matrix is not unimodular over Z_p[D]");
  return sf.v * sf.u;
}

PolyMatrix lift_unimodular(const PolyMatrix& u_p, const RingContext& target) {
  if (u_p.ring().p() != target.p()) throw UsageError("lift target has a different prime");
  try {
    inverse_zp(u_p.ring().is_field() ? u_p : u_p.project());
  } catch (const NotUnimodular&) {
    throw UsageError("cannot lift a matrix that is not unimodular over Z_p[D]");
  }
  return u_p.lift_to(target);
}

PolyMatrix invert_unimodular(const PolyMatrix& u) {
  const RingContext& ring = u.ring();
  PolyMatrix v = inverse_zp(u.project()).lift_to(ring);
  const PolyMatrix two = PolyMatrix::identity(ring, u.rows()).scaled(2 % ring.q());
  for (unsigned acc = 1; acc < ring.r(); acc *= 2) v = v * (two - u * v);
  const PolyMatrix id = PolyMatrix::identity(ring, u.rows());
  if (!(u * v == id) || !(v * u == id)) throw NotUnimodular("Newton lift did not converge");
  return v;
}

namespace {

// Minors on the listed rows, indexed by column subset; dp[S] uses the first
// |S| rows. Expansion along the last used row.
std::vector<Poly> minor_table(const PolyMatrix& m, const std::vector<std::size_t>& rows) {
  const std::size_t n = m.cols();
  const std::size_t depth = rows.size();
  std::vector<Poly> dp(std::size_t{1} << n, Poly(m.ring()));
  dp[0] = Poly::constant(m.ring(), 1);
  for (std::size_t mask = 1; mask < dp.size(); ++mask) {
    const auto size = static_cast<std::size_t>(std::popcount(mask));
    if (size > depth) continue;
    const std::size_t row = rows[size - 1];
    Poly acc(m.ring());
    std::size_t greater = size;
    for (std::size_t j = 0; j < n; ++j) {
      if (!(mask >> j & 1)) continue;
      --greater;
      const Poly& a = m.at(row, j);
      const Poly& sub = dp[mask & ~(std::size_t{1} << j)];
      if (a.is_zero() || sub.is_zero()) continue;
      if (greater % 2) acc -= a * sub;
      else acc += a * sub;
    }
    dp[mask] = std::move(acc);
  }
  return dp;
}

}  // namespace

Poly determinant(const PolyMatrix& m) {
  if (m.rows() != m.cols()) throw UsageError("determinant of a non-square matrix");
  if (m.rows() > 20) throw UsageError("determinant size beyond the subset expansion limit");
  std::vector<std::size_t> rows(m.rows());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  return minor_table(m, rows).back();
}

std::pair<PolyMatrix, Poly> adjugate(const PolyMatrix& m) {
  const std::size_t n = m.rows();
  if (n != m.cols()) throw UsageError("adjugate of a non-square matrix");
  if (n > 20) throw UsageError("adjugate size beyond the subset expansion limit");
  const RingContext& ring = m.ring();
  PolyMatrix adj(ring, n, n);
  if (n == 0) return {adj, Poly::constant(ring, 1)};
  const std::size_t full = (std::size_t{1} << n) - 1;
  Poly det(ring);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> rows;
    for (std::size_t t = 0; t < n; ++t)
      if (t != i) rows.push_back(t);
    const auto dp = minor_table(m, rows);
    for (std::size_t j = 0; j < n; ++j) {
      Poly c = dp[full & ~(std::size_t{1} << j)];
      if ((i + j) % 2) c = -c;
      if (i == 0 && !m.at(0, j).is_zero()) det += m.at(0, j) * c;
      adj.at(j, i) = std::move(c);
    }
  }
  return {std::move(adj), std::move(det)};
}

}  // namespace convring
