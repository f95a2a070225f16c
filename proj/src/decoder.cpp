#include "convring/decoder.hpp"

#include <algorithm>
#include <chrono>

#include "convring/errors.hpp"
#include "convring/zq_linalg.hpp"

namespace convring {

Received to_received(const Window& w) {
  Received out;
  out.reserve(w.size());
  for (const auto& s : w) out.emplace_back(s.begin(), s.end());
  return out;
}

WindowSystem build_window_system(const ConvCode& code, const Received& received, std::size_t i,
                                 std::size_t delay) {
  const RingContext& ring = code.ring();
  const std::size_t n = code.n();
  if (!code.has_parity_check()) throw UsageError("decoding needs a parity-check matrix");
  if (i >= received.size()) throw UsageError("window start is past the end of the stream");
  for (std::size_t s = 0; s < received.size(); ++s) {
    if (received[s].size() != n) throw UsageError("received slice has the wrong length");
    if (s < i)
      for (const auto& sym : received[s])
        if (!sym) throw UsageError("erasure before the window start");
  }
  const std::size_t end = std::min(i + delay, received.size() - 1);
  const std::size_t nu = static_cast<std::size_t>(code.nu());
  const PolyMatrix h = code.parity_check();
  const std::size_t m = h.rows();
  std::vector<ConstantMatrix> hc;
  for (std::size_t d = 0; d <= nu; ++d) hc.push_back(h.coefficient(static_cast<unsigned>(d)));

  WindowSystem sys{ring, n, i, end, {}, ConstantMatrix(ring, 0, 0), {}, ConstantMatrix(ring, 0, 0), {}, {}, {}};
  std::vector<std::ptrdiff_t> index((end - i + 1) * n, -1);
  for (std::size_t s = i; s <= end; ++s)
    for (std::size_t c = 0; c < n; ++c)
      if (!received[s][c]) {
        index[(s - i) * n + c] = static_cast<std::ptrdiff_t>(sys.unknowns.size());
        sys.unknowns.emplace_back(s, c);
      }
  const std::size_t e = sys.unknowns.size();
  const std::size_t rows = (end - i + 1) * m;
  sys.raw = ConstantMatrix(ring, rows, e);
  sys.raw_rhs.assign(rows, 0);
  for (std::size_t tau = i; tau <= end; ++tau)
    for (std::size_t rho = 0; rho < m; ++rho) {
      const std::size_t row = (tau - i) * m + rho;
      Residue known = 0;
      for (std::size_t s = tau >= nu ? tau - nu : 0; s <= tau; ++s) {
        const ConstantMatrix& hd = hc[tau - s];
        for (std::size_t c = 0; c < n; ++c) {
          const Residue coef = hd.at(rho, c);
          if (coef == 0) continue;
          if (s >= i && !received[s][c]) {
            auto& cell = sys.raw.at(row, static_cast<std::size_t>(index[(s - i) * n + c]));
            cell = ring.add(cell, coef);
          } else {
            known = ring.add(known, ring.mul(coef, *received[s][c] % ring.q()));
          }
        }
      }
      sys.raw_rhs[row] = ring.neg(known);
    }

  std::vector<std::vector<Residue>> kept;
  for (std::size_t row = 0; row < rows; ++row) {
    unsigned ve = ring.r();
    for (std::size_t j = 0; j < e; ++j) ve = std::min(ve, ring.valuation(sys.raw.at(row, j)));
    const Residue b = sys.raw_rhs[row];
    if (ve == ring.r()) {
      if (b != 0 && !sys.invalid)
        sys.invalid = "row " + std::to_string(row) + " has no erased symbol but a nonzero syndrome";
      continue;
    }
    if (ring.valuation(b) < ve) {
      if (!sys.invalid)
        sys.invalid = "row " + std::to_string(row) + " syndrome is not divisible by p^" + std::to_string(ve);
      continue;
    }
    std::vector<Residue> r(sys.raw.row(row).begin(), sys.raw.row(row).end());
    for (auto& x : r) x = ring.divide_by_p_power(x, ve);
    kept.push_back(std::move(r));
    sys.rhs.push_back(ring.divide_by_p_power(b, ve));
    sys.strata.push_back(ve);
  }
  sys.coeffs = ConstantMatrix(ring, kept.size(), e);
  for (std::size_t row = 0; row < kept.size(); ++row)
    for (std::size_t j = 0; j < e; ++j) sys.coeffs.at(row, j) = kept[row][j];
  return sys;
}

std::size_t ParametrizedSet::log_size() const noexcept {
  std::size_t s = 0;
  for (auto v : log_ranges) s += v;
  return s;
}

std::uint64_t DecodeOutcome::list_size(std::uint64_t p) const noexcept {
  if (kind == OutcomeKind::Invalid) return 0;
  std::uint64_t out = 1;
  for (std::size_t i = 0; i < log_list_size(); ++i) {
    if (out > UINT64_MAX / p) return UINT64_MAX;
    out *= p;
  }
  return out;
}

namespace {

DecodeOutcome invalid_outcome(DecodeOutcome out, std::optional<unsigned> stage, std::string why) {
  out.kind = OutcomeKind::Invalid;
  out.invalid_stage = stage;
  out.invalid_reason = std::move(why);
  out.solutions = {};
  return out;
}

Residue lift_digit(const RingContext& ring, Residue v) { return v % ring.p(); }

}  // namespace

DecodeOutcome list_decode(const WindowSystem& sys) {
  const RingContext& ring = sys.ring;
  const RingContext field = ring.field();
  const unsigned r = ring.r();
  const std::uint64_t p = ring.p();
  const std::size_t e = sys.e();
  DecodeOutcome out;
  if (sys.invalid) return invalid_outcome(std::move(out), std::nullopt, *sys.invalid);

  // Current solutions: y0 + sum_j c_j * gens[j] over Z_{p^r}, c integer.
  std::vector<Residue> y0(e, 0);
  std::vector<std::vector<Residue>> gens;

  for (unsigned t = 0; t < r; ++t) {
    std::vector<std::size_t> active;
    for (std::size_t row = 0; row < sys.strata.size(); ++row)
      if (sys.strata[row] + t <= r - 1) active.push_back(row);

    DigitStageResult stage;
    stage.stage = t;
    RrefResult red{ConstantMatrix(field, 0, 0), {}};
    bool done = false;
    for (std::size_t guard = 0; !done; ++guard) {
      if (guard > gens.size() + 2) throw Error("parameter constraints did not settle");
      const std::size_t mcount = gens.size();
      ConstantMatrix aug(field, active.size(), e + 1 + mcount);
      for (std::size_t a = 0; a < active.size(); ++a) {
        const auto row = sys.coeffs.row(active[a]);
        Residue f0 = sys.rhs[active[a]];
        for (std::size_t j = 0; j < e; ++j) f0 = ring.sub(f0, ring.mul(row[j], y0[j]));
        if (ring.valuation(f0) < t)
          return invalid_outcome(std::move(out), t,
                                 "residual of row " + std::to_string(active[a]) + " is not divisible by p^" +
                                     std::to_string(t));
        aug.at(a, e) = ring.divide_by_p_power(f0, t) % p;
        for (std::size_t c = 0; c < mcount; ++c) {
          Residue fc = 0;
          for (std::size_t j = 0; j < e; ++j) fc = ring.sub(fc, ring.mul(row[j], gens[c][j]));
          if (ring.valuation(fc) < t)
            return invalid_outcome(std::move(out), t,
                                   "parameter term of row " + std::to_string(active[a]) +
                                       " is not divisible by p^" + std::to_string(t));
          aug.at(a, e + 1 + c) = ring.divide_by_p_power(fc, t) % p;
        }
        for (std::size_t j = 0; j < e; ++j) aug.at(a, j) = row[j] % p;
      }
      red = rref(aug, &out.ops, e);

      // Rows without a pivot read 0 = rhs' + R' c.
      std::vector<std::vector<Residue>> cons_rows;
      std::vector<Residue> cons_rhs;
      for (std::size_t a = red.pivots.size(); a < active.size(); ++a) {
        bool has_param = false;
        for (std::size_t c = 0; c < mcount; ++c) has_param |= red.reduced.at(a, e + 1 + c) != 0;
        const Residue b = red.reduced.at(a, e);
        if (!has_param) {
          if (b != 0)
            return invalid_outcome(std::move(out), t, "stage " + std::to_string(t) + " system is inconsistent");
          continue;
        }
        std::vector<Residue> cr(mcount);
        for (std::size_t c = 0; c < mcount; ++c) cr[c] = red.reduced.at(a, e + 1 + c);
        cons_rows.push_back(std::move(cr));
        cons_rhs.push_back(field.neg(b));
      }
      if (cons_rows.empty()) {
        done = true;
        break;
      }

      stage.constraints_fired = true;
      out.constraints_fired = true;
      ConstantMatrix q(field, cons_rows.size(), mcount + 1);
      for (std::size_t a = 0; a < cons_rows.size(); ++a) {
        for (std::size_t c = 0; c < mcount; ++c) q.at(a, c) = cons_rows[a][c];
        q.at(a, mcount) = cons_rhs[a];
      }
      auto [qr, qpiv] = rref(q, &out.ops, mcount);
      for (std::size_t a = qpiv.size(); a < qr.rows(); ++a)
        if (qr.at(a, mcount) != 0)
          return invalid_outcome(std::move(out), t, "parameter constraints at stage " + std::to_string(t) +
                                                         " are infeasible");
      // c = c* + B c' over the integers, B spanning {c : Q c = 0 mod p}.
      std::vector<Residue> cstar(mcount, 0);
      std::vector<bool> is_pivot(mcount, false);
      for (std::size_t a = 0; a < qpiv.size(); ++a) {
        cstar[qpiv[a]] = qr.at(a, mcount);
        is_pivot[qpiv[a]] = true;
      }
      for (std::size_t j = 0; j < e; ++j)
        for (std::size_t c = 0; c < mcount; ++c)
          if (cstar[c] != 0) y0[j] = ring.add(y0[j], ring.mul(cstar[c], gens[c][j]));
      std::vector<std::vector<Residue>> next;
      for (std::size_t f = 0; f < mcount; ++f) {
        std::vector<Residue> col(e, 0);
        if (is_pivot[f]) {
          for (std::size_t j = 0; j < e; ++j) col[j] = ring.mul(p % ring.q(), gens[f][j]);
        } else {
          col = gens[f];
          for (std::size_t a = 0; a < qpiv.size(); ++a) {
            const Residue coef = lift_digit(ring, field.neg(qr.at(a, f)));
            if (coef == 0) continue;
            for (std::size_t j = 0; j < e; ++j) col[j] = ring.add(col[j], ring.mul(coef, gens[qpiv[a]][j]));
          }
        }
        next.push_back(std::move(col));
      }
      gens = std::move(next);
    }

    const std::size_t mcount = gens.size();
    std::vector<bool> is_pivot(e, false);
    std::vector<Residue> z0(e, 0);
    std::vector<std::vector<Residue>> zc(mcount, std::vector<Residue>(e, 0));
    for (std::size_t a = 0; a < red.pivots.size(); ++a) {
      const std::size_t pc = red.pivots[a];
      is_pivot[pc] = true;
      z0[pc] = red.reduced.at(a, e);
      for (std::size_t c = 0; c < mcount; ++c) zc[c][pc] = red.reduced.at(a, e + 1 + c);
    }
    std::vector<std::vector<Residue>> zd;
    for (std::size_t f = 0; f < e; ++f) {
      if (is_pivot[f]) continue;
      std::vector<Residue> col(e, 0);
      col[f] = 1;
      for (std::size_t a = 0; a < red.pivots.size(); ++a) col[red.pivots[a]] = field.neg(red.reduced.at(a, f));
      zd.push_back(std::move(col));
    }
    stage.rank = red.pivots.size();
    stage.set = AffineSet(field, z0, zd);
    stage.coupling = zc;
    stage.first_new_parameter = mcount;
    stage.new_parameters = zd.size();

    const Residue pt = ring.p_power(t);
    for (std::size_t j = 0; j < e; ++j) y0[j] = ring.add(y0[j], ring.mul(pt, z0[j]));
    for (std::size_t c = 0; c < mcount; ++c)
      for (std::size_t j = 0; j < e; ++j) gens[c][j] = ring.add(gens[c][j], ring.mul(pt, zc[c][j]));
    for (auto& col : zd) {
      for (auto& v : col) v = ring.mul(pt, v);
      gens.push_back(std::move(col));
    }
    out.stages.push_back(std::move(stage));
  }

  out.solutions.base = y0;
  if (!out.constraints_fired) {
    out.solutions.generators = gens;
    out.solutions.log_ranges.assign(gens.size(), 1);
  } else if (!gens.empty()) {
    ConstantMatrix g(ring, e, gens.size());
    for (std::size_t c = 0; c < gens.size(); ++c)
      for (std::size_t j = 0; j < e; ++j) g.at(j, c) = gens[c][j];
    ZqCoset mod = column_module(g);
    out.solutions.generators = std::move(mod.generators);
    out.solutions.log_ranges = std::move(mod.log_orders);
  }
  out.kind = out.solutions.log_size() == 0 ? OutcomeKind::Unique : OutcomeKind::List;
  return out;
}

std::optional<DecodeOutcome> try_unique_decode(const WindowSystem& sys) {
  if (!mccoy_unique(sys.raw)) return std::nullopt;
  DecodeOutcome out = list_decode(sys);
  if (out.kind == OutcomeKind::List) throw Error("full McCoy rank system produced a list");
  return out;
}

void for_each_solution(const RingContext& ring, const DecodeOutcome& outcome,
                       const std::function<bool(const std::vector<Residue>&)>& visit) {
  if (outcome.kind == OutcomeKind::Invalid) return;
  const ParametrizedSet& s = outcome.solutions;
  const std::size_t m = s.generators.size();
  std::vector<Residue> point = s.base;
  std::vector<std::uint64_t> k(m, 0), range(m);
  for (std::size_t i = 0; i < m; ++i) {
    range[i] = 1;
    for (unsigned t = 0; t < s.log_ranges[i]; ++t) range[i] *= ring.p();
  }
  for (;;) {
    if (!visit(point)) return;
    std::size_t i = 0;
    for (; i < m; ++i) {
      const auto& g = s.generators[i];
      for (std::size_t j = 0; j < point.size(); ++j) point[j] = ring.add(point[j], g[j]);
      if (++k[i] < range[i]) break;
      const Residue back = ring.reduce(static_cast<std::int64_t>(range[i] % ring.q()));
      for (std::size_t j = 0; j < point.size(); ++j) point[j] = ring.sub(point[j], ring.mul(back, g[j]));
      k[i] = 0;
    }
    if (i == m) return;
  }
}

MaterializedList materialize_list(const WindowSystem& sys, const DecodeOutcome& outcome,
                                  const Received& received, std::size_t limit) {
  MaterializedList out;
  Window templ;
  for (std::size_t s = sys.start; s <= sys.end; ++s) {
    Slice slice(sys.n, 0);
    for (std::size_t c = 0; c < sys.n; ++c)
      if (received[s][c]) slice[c] = *received[s][c] % sys.ring.q();
    templ.push_back(std::move(slice));
  }
  for_each_solution(sys.ring, outcome, [&](const std::vector<Residue>& x) {
    if (out.windows.size() >= limit) {
      out.truncated = true;
      return false;
    }
    Window w = templ;
    for (std::size_t u = 0; u < x.size(); ++u)
      w[sys.unknowns[u].first - sys.start][sys.unknowns[u].second] = x[u];
    out.windows.push_back(std::move(w));
    return true;
  });
  return out;
}

std::vector<std::vector<Residue>> oracle_decode(const ConvCode& code, const Received& received, std::size_t i,
                                                std::size_t delay, std::uint64_t cap) {
  const RingContext& ring = code.ring();
  const std::size_t n = code.n();
  if (i >= received.size()) throw UsageError("window start is past the end of the stream");
  for (std::size_t s = 0; s < i; ++s)
    for (const auto& sym : received[s])
      if (!sym) throw UsageError("erasure before the window start");
  const std::size_t end = std::min(i + delay, received.size() - 1);
  const PolyMatrix h = code.parity_check();
  const std::size_t m = h.rows();
  const int nu = std::max(h.degree(), 0);

  std::vector<std::pair<std::size_t, std::size_t>> unknowns;
  for (std::size_t s = i; s <= end; ++s)
    for (std::size_t c = 0; c < n; ++c)
      if (!received[s][c]) unknowns.emplace_back(s, c);
  const std::size_t e = unknowns.size();

  struct Row {
    Residue constant = 0;
    std::vector<std::pair<std::size_t, Residue>> terms;
  };
  std::vector<std::vector<Row>> rows_by_last(e + 1);
  for (std::size_t tau = i; tau <= end; ++tau)
    for (std::size_t rho = 0; rho < m; ++rho) {
      Row row;
      for (std::size_t s = 0; s <= tau; ++s) {
        if (tau - s > static_cast<std::size_t>(nu)) continue;
        for (std::size_t c = 0; c < n; ++c) {
          const Residue coef = h.at(rho, c).coeff(tau - s);
          if (coef == 0) continue;
          if (received[s][c]) {
            row.constant = ring.add(row.constant, ring.mul(coef, *received[s][c] % ring.q()));
          } else {
            const auto it = std::find(unknowns.begin(), unknowns.end(), std::make_pair(s, c));
            row.terms.emplace_back(static_cast<std::size_t>(it - unknowns.begin()), coef);
          }
        }
      }
      std::size_t last = 0;
      for (const auto& [u, coef] : row.terms) last = std::max(last, u + 1);
      rows_by_last[last].push_back(std::move(row));
    }

  std::vector<Residue> x(e, 0);
  auto row_holds = [&](const Row& row) {
    Residue acc = row.constant;
    for (const auto& [u, coef] : row.terms) acc = ring.add(acc, ring.mul(coef, x[u]));
    return acc == 0;
  };
  std::vector<std::vector<Residue>> found;
  for (const auto& row : rows_by_last[0])
    if (!row_holds(row)) return found;
  if (e == 0) {
    found.emplace_back();
    return found;
  }
  std::uint64_t nodes = 0;
  std::function<void(std::size_t)> dfs = [&](std::size_t u) {
    for (Residue v = 0; v < ring.q(); ++v) {
      if (++nodes > cap) throw CapExceeded("oracle search exceeds the cap");
      x[u] = v;
      bool ok = true;
      for (const auto& row : rows_by_last[u + 1])
        if (!row_holds(row)) {
          ok = false;
          break;
        }
      if (!ok) continue;
      if (u + 1 == e) found.push_back(x);
      else dfs(u + 1);
    }
  };
  dfs(0);
  return found;
}

namespace {

bool has_erasure(const ReceivedSlice& s) {
  return std::any_of(s.begin(), s.end(), [](const Symbol& v) { return !v.has_value(); });
}

void substitute(Received& stream, const WindowSystem& sys, const std::vector<Residue>& x, bool only_first) {
  for (std::size_t u = 0; u < x.size(); ++u) {
    const auto [s, c] = sys.unknowns[u];
    if (only_first && s != sys.start) continue;
    stream[s][c] = x[u];
  }
}

SequentialResult run_sequential(const ConvCode& code, Received stream, std::size_t from, std::size_t delay,
                                ListPolicy policy, std::size_t branch_limit, std::vector<SequentialStep> steps) {
  SequentialResult res;
  for (std::size_t i = from; i < stream.size(); ++i) {
    if (!has_erasure(stream[i])) continue;
    const auto t0 = std::chrono::steady_clock::now();
    const WindowSystem sys = build_window_system(code, stream, i, delay);
    DecodeOutcome out = list_decode(sys);
    SequentialStep step;
    step.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    step.rows = sys.raw.rows();
    for (const auto& st : out.stages) step.ranks.push_back(st.rank);
    step.time = i;
    step.window_end = sys.end;
    step.erasures = sys.e();
    step.kind = out.kind;
    step.log_list_size = out.kind == OutcomeKind::Invalid ? 0 : out.log_list_size();
    step.ops = out.ops.mac;
    if (out.kind == OutcomeKind::Invalid) {
      steps.push_back(step);
      res.status = SequentialStatus::Invalid;
      res.stream = std::move(stream);
      res.steps = std::move(steps);
      res.halting_outcome = std::move(out);
      return res;
    }
    bool unique = true;
    for (const auto& g : out.solutions.generators)
      for (std::size_t u = 0; u < sys.e() && unique; ++u)
        if (sys.unknowns[u].first == i && g[u] != 0) unique = false;
    step.unique = unique;
    steps.push_back(step);
    if (unique) {
      substitute(stream, sys, out.solutions.base, true);
      continue;
    }
    if (policy == ListPolicy::EmitListAndHalt) {
      res.status = SequentialStatus::HaltedOnList;
      res.stream = std::move(stream);
      res.steps = std::move(steps);
      res.halting_outcome = std::move(out);
      return res;
    }
    if (policy == ListPolicy::PickFirst) {
      substitute(stream, sys, out.solutions.base, false);
      continue;
    }
    std::optional<SequentialResult> last;
    std::size_t tried = 0;
    for_each_solution(code.ring(), out, [&](const std::vector<Residue>& x) {
      Received branch = stream;
      substitute(branch, sys, x, false);
      last = run_sequential(code, std::move(branch), i + 1, delay, policy, branch_limit, steps);
      ++tried;
      return last->status != SequentialStatus::Complete && tried < branch_limit;
    });
    return std::move(*last);
  }
  res.status = SequentialStatus::Complete;
  res.stream = std::move(stream);
  res.steps = std::move(steps);
  return res;
}

}  // namespace

SequentialResult sequential_decode(const ConvCode& code, const Received& received, std::size_t delay,
                                   ListPolicy policy, std::size_t branch_limit) {
  if (branch_limit == 0) branch_limit = 1;
  return run_sequential(code, received, 0, delay, policy, branch_limit, {});
}

}  // namespace convring
