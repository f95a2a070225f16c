#pragma once

// Helpers shared by the unit tests and the acceptance runner.

#include <random>
#include <set>
#include <string>
#include <vector>

#include "convring/decoder.hpp"
#include "convring/io.hpp"
#include "convring/poly_matrix.hpp"

namespace convring::testing {

inline std::string data_path(const std::string& name) {
  return std::string(CONVRING_TEST_DATA) + "/" + name;
}

inline ConvCode load_code(const std::string& name) { return parse_code(read_file(data_path(name))); }
inline StreamFile load_stream(const std::string& name) { return parse_stream(read_file(data_path(name))); }

/// Product of `steps` random elementary operations over Z_p[D]: unimodular by
/// construction, with a known inverse.
struct ElementaryProduct {
  PolyMatrix u;
  PolyMatrix u_inv;
};

inline ElementaryProduct random_elementary_product(const RingContext& field, std::size_t n,
                                                   unsigned steps, unsigned max_degree,
                                                   std::mt19937_64& rng) {
  ElementaryProduct e{PolyMatrix::identity(field, n), PolyMatrix::identity(field, n)};
  for (unsigned s = 0; s < steps; ++s) {
    const std::size_t a = rng() % n;
    std::size_t b = rng() % n;
    if (n > 1)
      while (b == a) b = rng() % n;
    switch (rng() % 3) {
      case 0: {
        if (n < 2) break;
        std::vector<Residue> c(max_degree + 1);
        for (auto& x : c) x = rng() % field.p();
        const Poly f(field, c);
        // row_a += f row_b on the left; its inverse subtracts on the right.
        e.u.add_row_multiple(a, b, f);
        e.u_inv.add_col_multiple(b, a, -f);
        break;
      }
      case 1:
        e.u.swap_rows(a, b);
        e.u_inv.swap_cols(a, b);
        break;
      default: {
        const Residue c = 1 + rng() % (field.p() - 1);
        e.u.scale_row(a, c);
        PolyMatrix d = PolyMatrix::identity(field, n);
        d.at(a, a) = Poly::constant(field, field.inverse(c));
        e.u_inv = e.u_inv * d;
      }
    }
  }
  return e;
}

/// Values of the system's unknowns inside a materialized window.
inline std::vector<Residue> unknown_values(const WindowSystem& sys, const Window& w) {
  std::vector<Residue> v;
  for (const auto& [t, c] : sys.unknowns) v.push_back(w[t - sys.start][c]);
  return v;
}

inline std::set<std::vector<Residue>> materialized_set(const WindowSystem& sys,
                                                       const MaterializedList& list) {
  std::set<std::vector<Residue>> s;
  for (const auto& w : list.windows) s.insert(unknown_values(sys, w));
  return s;
}

/// Z_{p^r} kernel words of degree <= d: the coefficient system of H(D) w(D) = 0
/// over all output degrees, with unknowns ordered time-major.
inline ConstantMatrix full_toeplitz(const ConvCode& code, unsigned d) {
  const std::size_t m = code.parity_check().rows(), n = code.n();
  const unsigned nu = static_cast<unsigned>(std::max(code.nu(), 0));
  ConstantMatrix a(code.ring(), (d + nu + 1) * m, (d + 1) * n);
  for (unsigned t = 0; t <= d + nu; ++t)
    for (unsigned s = 0; s <= d && s <= t; ++s) {
      if (t - s > nu) continue;
      const ConstantMatrix h = code.h_coefficient(t - s);
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t c = 0; c < n; ++c) a.at(t * m + i, s * n + c) = h.at(i, c);
    }
  return a;
}

}  // namespace convring::testing
