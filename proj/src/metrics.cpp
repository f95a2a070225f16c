#include "convring/metrics.hpp"

#include <algorithm>
#include <functional>

#include "convring/errors.hpp"
#include "convring/zp_linalg.hpp"
#include "convring/zq_linalg.hpp"

namespace convring {

std::size_t hamming_weight(const Window& w) {
  std::size_t count = 0;
  for (const auto& s : w)
    for (Residue v : s) count += v != 0;
  return count;
}

std::size_t hamming_weight(const PolyVector& w) {
  std::size_t count = 0;
  for (const auto& f : w)
    for (Residue v : f.coeffs()) count += v != 0;
  return count;
}

namespace {

// Visits k-subsets of [0, total) whose smallest element is below `first`,
// in lexicographic order. Stops when visit returns true.
bool for_each_support(std::size_t total, std::size_t k, std::size_t first, std::uint64_t cap,
                      std::uint64_t& visited,
                      const std::function<bool(const std::vector<std::size_t>&)>& visit) {
  if (k == 0 || k > total) return false;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  for (;;) {
    if (idx[0] >= first) return false;
    if (++visited > cap) throw CapExceeded("support enumeration exceeds the cap");
    if (visit(idx)) return true;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == total - k + (i - 1)) --i;
    if (i == 0) return false;
    ++idx[i - 1];
    for (std::size_t t = i; t < k; ++t) idx[t] = idx[t - 1] + 1;
  }
}

// A kernel element of the selected columns with a nonzero entry on a column
// below `first`, if one exists.
std::optional<std::vector<Residue>> touching_kernel_element(const ConstantMatrix& h,
                                                            const std::vector<std::size_t>& cols,
                                                            std::size_t first) {
  const ConstantMatrix sub = h.select_columns(cols);
  const std::vector<Residue> zero(h.rows(), 0);
  const ZqCoset ker = solve_zq(sub, zero);
  for (const auto& g : ker.generators)
    for (std::size_t i = 0; i < cols.size(); ++i)
      if (cols[i] < first && g[i] != 0) return g;
  return std::nullopt;
}

}  // namespace

bool first_slice_recoverable(const ConstantMatrix& sliding, std::size_t n,
                             const std::vector<std::size_t>& erased) {
  if (erased.empty()) return true;
  return !touching_kernel_element(sliding, erased, n).has_value();
}

std::optional<ColumnDistance> column_distance(const ConvCode& code, unsigned j, std::uint64_t cap) {
  const ConstantMatrix h = sliding_matrix(code, j);
  const std::size_t n = code.n(), total = h.cols();
  std::uint64_t visited = 0;
  for (std::size_t w = 1; w <= total; ++w) {
    std::optional<ColumnDistance> found;
    for_each_support(total, w, n, cap, visited, [&](const std::vector<std::size_t>& cols) {
      auto g = touching_kernel_element(h, cols, n);
      if (!g) return false;
      Window win(j + 1, Slice(n, 0));
      for (std::size_t i = 0; i < cols.size(); ++i) win[cols[i] / n][cols[i] % n] = (*g)[i];
      found = ColumnDistance{hamming_weight(win), std::move(win)};
      return true;
    });
    if (found) return found;
  }
  return std::nullopt;
}

std::optional<FreeDistance> free_distance_bounded(const ConvCode& code, unsigned max_degree,
                                                  std::uint64_t cap) {
  if (!code.has_generator()) throw UsageError("free distance needs a generator matrix");
  const RingContext& ring = code.ring();
  const PolyMatrix g = code.generator();
  if (g.rows() == 0 || g.is_zero()) return std::nullopt;
  const std::size_t k = g.rows(), n = g.cols();
  const std::size_t len = max_degree + 1;
  const std::size_t span = len + static_cast<std::size_t>(std::max(g.degree(), 0));
  const std::size_t unknowns = k * len;

  long double space = 1;
  for (std::size_t i = 0; i < unknowns; ++i) space *= static_cast<long double>(ring.q());
  if (space > static_cast<long double>(cap)) throw CapExceeded("codeword enumeration exceeds the cap");

  // Column u of the map sends input coefficient (row, s) to its codeword.
  std::vector<std::vector<Residue>> cols(unknowns, std::vector<Residue>(n * span, 0));
  for (std::size_t row = 0; row < k; ++row)
    for (std::size_t s = 0; s < len; ++s)
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t t = 0; t + s < span; ++t)
          cols[row * len + s][(t + s) * n + c] = g.at(row, c).coeff(t);

  std::vector<Residue> word(n * span, 0), digits(unknowns, 0), best_digits;
  std::size_t best = SIZE_MAX;
  for (;;) {
    std::size_t i = 0;
    for (; i < unknowns; ++i) {
      for (std::size_t t = 0; t < word.size(); ++t) word[t] = ring.add(word[t], cols[i][t]);
      if (++digits[i] < ring.q()) break;
      digits[i] = 0;
    }
    if (i == unknowns) break;
    std::size_t wt = 0;
    for (Residue v : word) wt += v != 0;
    if (wt != 0 && wt < best) best = wt, best_digits = digits;
  }
  if (best == SIZE_MAX) return std::nullopt;

  PolyVector u(k, Poly(ring));
  for (std::size_t row = 0; row < k; ++row) {
    std::vector<Residue> c(best_digits.begin() + static_cast<std::ptrdiff_t>(row * len),
                           best_digits.begin() + static_cast<std::ptrdiff_t>((row + 1) * len));
    u[row] = Poly(ring, std::move(c));
  }
  FreeDistance out{best, false, encode(code, u)};
  if (code.has_parity_check()) {
    std::size_t bound = 0;
    try {
      for (unsigned j = 0; j <= max_degree + static_cast<unsigned>(code.nu()); ++j)
        if (auto cd = column_distance(code, j, cap)) bound = std::max(bound, cd->distance);
    } catch (const CapExceeded&) {
    }
    out.exact = bound == best;
  }
  return out;
}

ErasureCapabilityReport erasure_capability_check(const ConvCode& code, unsigned j, std::size_t d,
                                                 std::uint64_t cap) {
  const ConstantMatrix h = sliding_matrix(code, j);
  const std::size_t n = code.n(), total = h.cols();
  ErasureCapabilityReport rep;
  std::uint64_t visited = 0;

  rep.small_sets_independent =
      d <= 1 || !for_each_support(total, std::min(d - 1, total), n, cap, visited,
                                  [&](const std::vector<std::size_t>& cols) {
                                    return touching_kernel_element(h, cols, n).has_value();
                                  });
  if (d >= 1 && d <= total)
    rep.dependent_set_found =
        for_each_support(total, d, n, cap, visited, [&](const std::vector<std::size_t>& cols) {
          if (!touching_kernel_element(h, cols, n)) return false;
          rep.dependent_columns = cols;
          return true;
        });

  rep.projected_span_condition = true;
  if (d >= 2) {
    const ConstantMatrix hp = h.project();
    const std::size_t others = std::min(d - 2, total - 1);
    for (std::size_t i = 0; i < n && rep.projected_span_condition; ++i) {
      std::vector<std::size_t> rest;
      for (std::size_t c = 0; c < total; ++c)
        if (c != i) rest.push_back(c);
      if (others == 0) {
        const auto col = hp.column(i);
        rep.projected_span_condition = std::any_of(col.begin(), col.end(), [](Residue v) { return v != 0; });
        continue;
      }
      for_each_support(rest.size(), others, rest.size(), cap, visited,
                       [&](const std::vector<std::size_t>& pick) {
                         std::vector<std::size_t> cols;
                         for (auto t : pick) cols.push_back(rest[t]);
                         const std::size_t without = rank(hp.select_columns(cols));
                         cols.push_back(i);
                         if (rank(hp.select_columns(cols)) == without) {
                           rep.projected_span_condition = false;
                           return true;
                         }
                         return false;
                       });
    }
  }
  return rep;
}

}  // namespace convring
