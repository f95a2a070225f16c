#include "convring/code.hpp"

#include <deque>

#include "convring/errors.hpp"
#include "convring/polynomial_forms.hpp"
#include "convring/zp_linalg.hpp"
#include "convring/zq_linalg.hpp"

namespace convring {

namespace {

using Row = std::vector<Poly>;

Row reduce_mod_p_power(const Row& x, const RingContext& ring, unsigned k) {
  Row out;
  out.reserve(x.size());
  const Residue m = k >= ring.r() ? ring.q() : ring.p_power(k);
  for (const auto& f : x) {
    std::vector<Residue> c(f.coeffs());
    for (auto& v : c) v %= m;
    out.emplace_back(ring, std::move(c));
  }
  return out;
}

// Rewrites p^level * x as p^{level'} * x' with x' holding a unit coefficient.
// Returns ring.r() as the level when the row vanishes.
std::pair<unsigned, Row> normalize(const Row& x, const RingContext& ring, unsigned level) {
  Row y = reduce_mod_p_power(x, ring, ring.r() - level);
  unsigned v = ring.r();
  for (const auto& f : y) v = std::min(v, f.valuation());
  if (level + v >= ring.r()) return {ring.r(), {}};
  for (auto& f : y) f = f.divided_by_p_power(v);
  return {level + v, reduce_mod_p_power(y, ring, ring.r() - level - v)};
}

struct EchelonRow {
  Row e;
  std::size_t pivot_col;
  std::vector<Poly> rep;  // e = sum rep[l] * accepted[l], over Z_p
};

PolyMatrix rows_to_matrix(const RingContext& ring, const std::vector<Row>& rows, std::size_t n) {
  PolyMatrix m(ring, rows.size(), n);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < n; ++j) m.at(i, j) = rows[i][j];
  return m;
}

}  // namespace

StandardForm standard_form(const PolyMatrix& g_raw) {
  const RingContext& ring = g_raw.ring();
  const RingContext f = ring.field();
  const unsigned r = ring.r();
  const std::size_t n = g_raw.cols();
  std::vector<std::deque<Row>> queues(r);
  for (std::size_t i = 0; i < g_raw.rows(); ++i) {
    Row x(n, Poly(ring));
    for (std::size_t j = 0; j < n; ++j) x[j] = g_raw.at(i, j);
    auto [lvl, y] = normalize(x, ring, 0);
    if (lvl < r) queues[lvl].push_back(std::move(y));
  }

  std::vector<Row> accepted;
  std::vector<unsigned> accepted_level;
  std::vector<EchelonRow> echelon;
  StandardForm out;

  for (unsigned s = 0; s < r; ++s) {
    while (!queues[s].empty()) {
      Row x = std::move(queues[s].front());
      queues[s].pop_front();
      Row cur(n, Poly(f));
      for (std::size_t j = 0; j < n; ++j) cur[j] = x[j].project();
      Poly d = Poly::constant(f, 1);
      std::vector<Poly> c(accepted.size(), Poly(f));
      for (const auto& er : echelon) {
        const Poly& a = cur[er.pivot_col];
        if (a.is_zero()) continue;
        const Poly& piv = er.e[er.pivot_col];
        const Poly g = gcd(a, piv);
        const Poly alpha = piv.divmod(g).first;
        const Poly beta = a.divmod(g).first;
        for (std::size_t j = 0; j < n; ++j) cur[j] = alpha * cur[j] - beta * er.e[j];
        d = alpha * d;
        for (std::size_t l = 0; l < c.size(); ++l) {
          c[l] = alpha * c[l];
          if (l < er.rep.size()) c[l] += beta * er.rep[l];
        }
      }
      std::size_t pc = 0;
      while (pc < n && cur[pc].is_zero()) ++pc;
      if (pc < n) {
        std::vector<Poly> rep(c.size() + 1, Poly(f));
        for (std::size_t l = 0; l < c.size(); ++l) rep[l] = -c[l];
        rep.back() = d;
        echelon.push_back({std::move(cur), pc, std::move(rep)});
        accepted.push_back(std::move(x));
        accepted_level.push_back(s);
        continue;
      }
      // d * x = sum c_l a_l mod p: push the p-divisible difference up a level.
      if (d.degree() > 0) out.polynomial_exact = false;
      const Poly d_lift = d.lift_to(ring);
      Row z(n, Poly(ring));
      for (std::size_t j = 0; j < n; ++j) z[j] = d_lift * x[j];
      for (std::size_t l = 0; l < accepted.size(); ++l) {
        if (c[l].is_zero()) continue;
        const Poly cl = c[l].lift_to(ring);
        for (std::size_t j = 0; j < n; ++j) z[j] -= cl * accepted[l][j];
      }
      z = reduce_mod_p_power(z, ring, r - s);
      for (auto& zj : z) zj = zj.divided_by_p_power(1);
      if (s + 1 >= r) continue;
      auto [lvl, y] = normalize(z, ring, s + 1);
      if (lvl < r) queues[lvl].push_back(std::move(y));
    }
  }

  std::vector<std::vector<Row>> by_level(r);
  for (std::size_t l = 0; l < accepted.size(); ++l) by_level[accepted_level[l]].push_back(accepted[l]);
  for (unsigned s = 0; s < r; ++s) out.blocks.push_back(rows_to_matrix(ring, by_level[s], n));
  return out;
}

ParityCheckSynthesis synthesize_parity_check(const RingContext& ring,
                                             const std::vector<PolyMatrix>& g_blocks) {
  const unsigned r = ring.r();
  if (g_blocks.size() != r) throw UsageError("expected one generator block per p-power level");
  const std::size_t n = g_blocks.front().cols();
  PolyMatrix stack(ring, 0, n);
  for (const auto& b : g_blocks) stack = PolyMatrix::vstack(stack, b);
  const std::size_t k = stack.rows();
  if (k > n) throw ConstructionError("more generator rows than the code length");
  const PolyMatrix proj = stack.project();

  ParityCheckSynthesis out{{}, PolyMatrix(ring, 0, n), {}, false};
  PolyMatrix completion(ring.field(), 0, n);
  if (is_left_prime(proj)) {
    out.exact_kernel = true;
    completion = unimodular_complete(proj);
  } else {
    completion = nonsingular_complete(proj);
  }
  const PolyMatrix m = PolyMatrix::vstack(stack, completion.lift_to(ring));
  PolyMatrix x(ring, n, n);
  if (out.exact_kernel) {
    x = invert_unimodular(m).transpose();
    out.p_diag.assign(n, Poly::constant(ring, 1));
  } else {
    auto [adj, det] = adjugate(m);
    x = adj.transpose();
    out.p_diag.assign(n, det);
  }

  std::vector<std::size_t> offset(r + 1, 0);
  for (unsigned i = 0; i < r; ++i) offset[i + 1] = offset[i] + g_blocks[i].rows();
  out.l = x.row_range(0, g_blocks[0].rows());
  out.h_blocks.assign(r, PolyMatrix(ring, 0, n));
  out.h_blocks[0] = x.row_range(k, n - k);
  for (unsigned i = 1; i < r; ++i) out.h_blocks[r - i] = x.row_range(offset[i], g_blocks[i].rows());
  return out;
}

std::size_t ConvCode::k() const noexcept {
  std::size_t k = 0;
  for (auto v : k_blocks_) k += v;
  return k;
}

std::vector<std::size_t> ConvCode::l_blocks() const {
  std::vector<std::size_t> l(ring_.r());
  l[0] = n_ - k();
  for (unsigned i = 1; i < ring_.r(); ++i) l[i] = k_blocks_[ring_.r() - i];
  return l;
}

static PolyMatrix scaled_stack(const RingContext& ring, const std::vector<PolyMatrix>& blocks,
                               std::size_t n) {
  PolyMatrix out(ring, 0, n);
  for (unsigned i = 0; i < blocks.size(); ++i)
    out = PolyMatrix::vstack(out, blocks[i].scaled(ring.p_power(i)));
  return out;
}

static PolyMatrix plain_stack(const RingContext& ring, const std::vector<PolyMatrix>& blocks,
                              std::size_t n) {
  PolyMatrix out(ring, 0, n);
  for (const auto& b : blocks) out = PolyMatrix::vstack(out, b);
  return out;
}

PolyMatrix ConvCode::generator() const { return scaled_stack(ring_, g_blocks_, n_); }
PolyMatrix ConvCode::parity_check() const { return scaled_stack(ring_, h_blocks_, n_); }
PolyMatrix ConvCode::projected_generator_stack() const { return plain_stack(ring_, g_blocks_, n_).project(); }
PolyMatrix ConvCode::projected_parity_stack() const { return plain_stack(ring_, h_blocks_, n_).project(); }

ConstantMatrix ConvCode::h_coefficient(unsigned j) const { return parity_check().coefficient(j); }

void ConvCode::finish_parity_side() {
  const int d = parity_check().degree();
  nu_ = d < 0 ? 0 : d;
}

static void check_blocks(const RingContext& ring, const std::vector<PolyMatrix>& blocks,
                         const char* what) {
  if (blocks.size() != ring.r())
    throw ConstructionError(std::string("expected r ") + what + " blocks");
  for (const auto& b : blocks) {
    if (!(b.ring() == ring)) throw UsageError(std::string(what) + " block over the wrong ring");
    if (b.cols() != blocks.front().cols())
      throw ConstructionError(std::string(what) + " blocks differ in width");
  }
}

static bool full_row_rank(const PolyMatrix& proj) {
  if (proj.rows() > proj.cols()) return false;
  // A full-rank constant term settles it without a Smith form.
  if (rank(proj.coefficient(0)) == proj.rows()) return true;
  for (const auto& g : smith_form(proj).factors)
    if (g.is_zero()) return false;
  return true;
}

ConvCode ConvCode::from_standard_blocks(const RingContext& ring, std::vector<PolyMatrix> g_blocks) {
  check_blocks(ring, g_blocks, "generator");
  ConvCode code(ring);
  code.n_ = g_blocks.front().cols();
  for (const auto& b : g_blocks) code.k_blocks_.push_back(b.rows());
  code.g_blocks_ = std::move(g_blocks);
  if (!full_row_rank(code.projected_generator_stack()))
    throw ConstructionError("projected generator stack is not of full row rank");
  ParityCheckSynthesis syn = synthesize_parity_check(ring, code.g_blocks_);
  code.observable_ = syn.exact_kernel;
  code.h_blocks_ = std::move(syn.h_blocks);
  code.p_diag_ = std::move(syn.p_diag);
  if (code.observable_) code.l_ = std::move(syn.l);
  code.finish_parity_side();
  return code;
}

ConvCode ConvCode::from_generator(const PolyMatrix& g_raw) {
  if (g_raw.is_zero()) throw ConstructionError("zero generator matrix");
  return from_standard_blocks(g_raw.ring(), standard_form(g_raw).blocks);
}

ConvCode ConvCode::from_parity_check(const RingContext& ring, std::vector<PolyMatrix> h_blocks,
                                     bool derive_generator) {
  check_blocks(ring, h_blocks, "parity-check");
  ConvCode code(ring);
  const unsigned r = ring.r();
  code.n_ = h_blocks.front().cols();
  std::size_t l_total = 0;
  for (const auto& b : h_blocks) l_total += b.rows();
  if (l_total > code.n_) throw ConstructionError("more parity-check rows than the code length");
  code.k_blocks_.assign(r, 0);
  code.k_blocks_[0] = code.n_ - l_total;
  for (unsigned i = 1; i < r; ++i) code.k_blocks_[i] = h_blocks[r - i].rows();
  code.h_blocks_ = std::move(h_blocks);
  code.observable_ = true;
  code.p_diag_.assign(code.n_, Poly::constant(ring, 1));
  const PolyMatrix proj = code.projected_parity_stack();
  if (!full_row_rank(proj)) throw ConstructionError("projected parity-check stack is not of full row rank");
  code.finish_parity_side();
  if (!derive_generator || !is_left_prime(proj)) return code;

  const PolyMatrix completion = unimodular_complete(proj).lift_to(ring);
  const PolyMatrix m = PolyMatrix::vstack(plain_stack(ring, code.h_blocks_, code.n_), completion);
  const PolyMatrix y = invert_unimodular(m).transpose();
  std::vector<std::size_t> offset(r + 1, 0);
  for (unsigned i = 0; i < r; ++i) offset[i + 1] = offset[i] + code.h_blocks_[i].rows();
  code.g_blocks_.assign(r, PolyMatrix(ring, 0, code.n_));
  code.g_blocks_[0] = y.row_range(l_total, code.n_ - l_total);
  for (unsigned i = 1; i < r; ++i)
    code.g_blocks_[r - i] = y.row_range(offset[i], code.h_blocks_[i].rows());
  code.l_ = completion;
  return code;
}

ConvCode ConvCode::from_blocks(const RingContext& ring, std::vector<PolyMatrix> g_blocks,
                               std::vector<PolyMatrix> h_blocks) {
  check_blocks(ring, g_blocks, "generator");
  check_blocks(ring, h_blocks, "parity-check");
  ConvCode code(ring);
  code.n_ = g_blocks.front().cols();
  if (h_blocks.front().cols() != code.n_) throw ConstructionError("G and H widths differ");
  for (const auto& b : g_blocks) code.k_blocks_.push_back(b.rows());
  code.g_blocks_ = std::move(g_blocks);
  code.h_blocks_ = std::move(h_blocks);
  const auto l = code.l_blocks();
  for (unsigned i = 0; i < ring.r(); ++i)
    if (code.h_blocks_[i].rows() != l[i]) throw ConstructionError("H block sizes do not match k_blocks");
  const PolyMatrix g_proj = code.projected_generator_stack();
  if (!full_row_rank(g_proj)) throw ConstructionError("projected generator stack is not of full row rank");
  if (!full_row_rank(code.projected_parity_stack()))
    throw ConstructionError("projected parity-check stack is not of full row rank");
  if (!(code.parity_check() * code.generator().transpose()).is_zero())
    throw ConstructionError("H(D) G(D)^T is not zero");
  code.observable_ = is_left_prime(g_proj);
  code.finish_parity_side();
  return code;
}

ConstantMatrix sliding_matrix(const ConvCode& code, unsigned j) {
  const RingContext& ring = code.ring();
  const PolyMatrix h = code.parity_check();
  const std::size_t m = h.rows(), n = code.n();
  ConstantMatrix out(ring, m * (j + 1), n * (j + 1));
  for (unsigned d = 0; d <= j; ++d) {
    const ConstantMatrix hd = h.coefficient(d);
    if (hd.is_zero()) continue;
    for (unsigned b = 0; b + d <= j; ++b) {
      const unsigned a = b + d;
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t c = 0; c < n; ++c) out.at(a * m + i, b * n + c) = hd.at(i, c);
    }
  }
  return out;
}

bool is_codeword_window(const ConvCode& code, const Window& w) {
  if (w.empty()) return true;
  const ConstantMatrix s = sliding_matrix(code, static_cast<unsigned>(w.size() - 1));
  std::vector<Residue> flat;
  for (const auto& slice : w) {
    if (slice.size() != code.n()) throw UsageError("window slice has the wrong length");
    flat.insert(flat.end(), slice.begin(), slice.end());
  }
  for (Residue v : s.apply(flat))
    if (v != 0) return false;
  return true;
}

static PolyVector apply_matrix(const PolyMatrix& m, const PolyVector& x) {
  if (x.size() != m.cols()) throw UsageError("vector length does not match the matrix");
  PolyVector out(m.rows(), Poly(m.ring()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!m.at(i, j).is_zero() && !x[j].is_zero()) out[i] += m.at(i, j) * x[j];
  return out;
}

PolyVector encode(const ConvCode& code, const PolyVector& u) {
  if (!code.has_generator()) throw UsageError("code has no generator matrix");
  return apply_matrix(code.generator().transpose(), u);
}

bool in_kernel(const ConvCode& code, const PolyVector& w) {
  for (const auto& f : apply_matrix(code.parity_check(), w))
    if (!f.is_zero()) return false;
  return true;
}

std::optional<PolyVector> preimage(const ConvCode& code, const PolyVector& w) {
  if (!code.preimage_block() || !code.has_generator()) return std::nullopt;
  if (!in_kernel(code, w)) return std::nullopt;
  const RingContext& ring = code.ring();
  const unsigned r = ring.r();
  PolyVector u = apply_matrix(*code.preimage_block(), w);
  for (unsigned i = 1; i < r; ++i) {
    PolyVector hw = apply_matrix(code.h_blocks()[r - i], w);
    for (auto& f : hw) {
      if (f.valuation() < i) return std::nullopt;
      f = f.divided_by_p_power(i);
    }
    u.insert(u.end(), hw.begin(), hw.end());
  }
  if (encode(code, u) != w) return std::nullopt;
  return u;
}

bool in_code_bounded(const ConvCode& code, const PolyVector& w, unsigned max_input_degree) {
  if (!code.has_generator()) throw UsageError("code has no generator matrix");
  const RingContext& ring = code.ring();
  const PolyMatrix g = code.generator();
  const std::size_t k = g.rows(), n = g.cols();
  int wdeg = kZeroDegree;
  for (const auto& f : w) wdeg = std::max(wdeg, f.degree());
  const int gdeg = std::max(g.degree(), 0);
  const std::size_t span = static_cast<std::size_t>(std::max<int>(wdeg, static_cast<int>(max_input_degree) + gdeg)) + 1;
  const std::size_t unknowns = k * (max_input_degree + 1);
  ConstantMatrix a(ring, n * span, unknowns);
  std::vector<Residue> b(n * span, 0);
  for (std::size_t t = 0; t < span; ++t)
    for (std::size_t c = 0; c < n; ++c) {
      b[t * n + c] = w[c].coeff(t);
      for (std::size_t row = 0; row < k; ++row)
        for (unsigned s = 0; s <= max_input_degree && s <= t; ++s)
          a.at(t * n + c, row * (max_input_degree + 1) + s) = g.at(row, c).coeff(t - s);
    }
  return solve_zq(a, b).feasible;
}

Window to_window(const PolyVector& w, std::size_t length) {
  Window out(length, Slice(w.size(), 0));
  for (std::size_t t = 0; t < length; ++t)
    for (std::size_t c = 0; c < w.size(); ++c) out[t][c] = w[c].coeff(t);
  return out;
}

PolyVector from_window(const RingContext& ring, const Window& w) {
  const std::size_t n = w.empty() ? 0 : w.front().size();
  PolyVector out(n, Poly(ring));
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<Residue> coeffs(w.size());
    for (std::size_t t = 0; t < w.size(); ++t) coeffs[t] = w[t][c];
    out[c] = Poly(ring, std::move(coeffs));
  }
  return out;
}

}  // namespace convring
