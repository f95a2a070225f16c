#pragma once

#include <optional>
#include <vector>

#include "convring/matrix.hpp"
#include "convring/poly_matrix.hpp"

namespace convring {

/// One time slice w^t of a codeword, and a run of consecutive slices.
using Slice = std::vector<Residue>;
using Window = std::vector<Slice>;

/// Generator rows split by p-power level: row block i enters G(D) as p^i G_i.
struct StandardForm {
  std::vector<PolyMatrix> blocks;
  /// True when every elimination multiplier was a constant; then the blocks
  /// and the input generate the same polynomial row module. Otherwise equality
  /// holds over Laurent series and the blocks span a submodule.
  bool polynomial_exact = true;
};

StandardForm standard_form(const PolyMatrix& g_raw);

/// Stacked inverse or adjugate rows [L; H_{r-1}; ...; H_0] of the completed
/// generator stack, paired against [G_0; ...; G_{r-1}; N].
struct ParityCheckSynthesis {
  std::vector<PolyMatrix> h_blocks;
  PolyMatrix l;
  std::vector<Poly> p_diag;
  bool exact_kernel = false;
};

ParityCheckSynthesis synthesize_parity_check(const RingContext& ring,
                                             const std::vector<PolyMatrix>& g_blocks);

class ConvCode {
 public:
  /// Standard form of the raw generator, then parity-check synthesis.
  static ConvCode from_generator(const PolyMatrix& g_raw);
  static ConvCode from_standard_blocks(const RingContext& ring, std::vector<PolyMatrix> g_blocks);
  /// Code ker H. The generator side is derived when [H_0; ...]_p is left
  /// prime, unless derive_generator is false.
  static ConvCode from_parity_check(const RingContext& ring, std::vector<PolyMatrix> h_blocks,
                                    bool derive_generator = true);
  /// Both sides given explicitly; all contracts are checked.
  static ConvCode from_blocks(const RingContext& ring, std::vector<PolyMatrix> g_blocks,
                              std::vector<PolyMatrix> h_blocks);

  const RingContext& ring() const noexcept { return ring_; }
  std::size_t n() const noexcept { return n_; }
  std::size_t k() const noexcept;
  const std::vector<std::size_t>& k_blocks() const noexcept { return k_blocks_; }
  /// Row counts of H_0, ..., H_{r-1}: n-k, k_{r-1}, ..., k_1.
  std::vector<std::size_t> l_blocks() const;
  bool has_generator() const noexcept { return !g_blocks_.empty(); }
  bool has_parity_check() const noexcept { return !h_blocks_.empty(); }
  /// [G_0; ...]_p left prime (always true for codes defined by H).
  bool observable() const noexcept { return observable_; }
  int nu() const noexcept { return nu_; }

  const std::vector<PolyMatrix>& g_blocks() const noexcept { return g_blocks_; }
  const std::vector<PolyMatrix>& h_blocks() const noexcept { return h_blocks_; }
  const std::optional<PolyMatrix>& preimage_block() const noexcept { return l_; }
  const std::vector<Poly>& p_diag() const noexcept { return p_diag_; }

  /// G(D) = [G_0; p G_1; ...].
  PolyMatrix generator() const;
  /// H(D) = [H_0; p H_1; ...].
  PolyMatrix parity_check() const;
  PolyMatrix projected_generator_stack() const;
  PolyMatrix projected_parity_stack() const;
  /// H^j, zero for j > nu.
  ConstantMatrix h_coefficient(unsigned j) const;

 private:
  explicit ConvCode(const RingContext& ring) : ring_(ring) {}
  void finish_parity_side();

  RingContext ring_;
  std::size_t n_ = 0;
  std::vector<std::size_t> k_blocks_;
  std::vector<PolyMatrix> g_blocks_;
  std::vector<PolyMatrix> h_blocks_;
  std::optional<PolyMatrix> l_;
  std::vector<Poly> p_diag_;
  bool observable_ = false;
  int nu_ = 0;
};

/// Block lower-triangular Toeplitz matrix with blocks H^{a-b}.
ConstantMatrix sliding_matrix(const ConvCode& code, unsigned j);
bool is_codeword_window(const ConvCode& code, const Window& w);

/// G(D)^T u(D) for an input of length k.
PolyVector encode(const ConvCode& code, const PolyVector& u);
bool in_kernel(const ConvCode& code, const PolyVector& w);
/// u with G(D)^T u = w built from the stored pairing block; nullopt when w is
/// not in ker H or no pairing block is known.
std::optional<PolyVector> preimage(const ConvCode& code, const PolyVector& w);
/// Whether G(D)^T u = w has a solution with deg u <= max_input_degree.
bool in_code_bounded(const ConvCode& code, const PolyVector& w, unsigned max_input_degree);

/// Slices w^0, ..., w^{length-1} of a polynomial vector.
Window to_window(const PolyVector& w, std::size_t length);
PolyVector from_window(const RingContext& ring, const Window& w);

}  // namespace convring
