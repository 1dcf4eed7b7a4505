#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gw/bwp_tree.hpp"
#include "gw/graph.hpp"

namespace gw {

/// Haar-type coefficients of one wedge split: differences between the means
/// of the two children and the mean of the parent.
struct WaveletSplit {
  std::uint32_t j = 0;  // center index of the split subset
  std::uint32_t m = 0;  // center index of the new center
  std::size_t plus_size = 0;
  std::size_t minus_size = 0;
  double c_plus = 0.0;
  double c_minus = 0.0;
};

/// Root coefficient (global mean) plus one coefficient pair per split:
/// 2M - 1 wavelets in total.
struct WaveletDecomposition {
  std::size_t n = 0;
  double root = 0.0;
  std::vector<WaveletSplit> splits;

  std::size_t wavelet_count() const noexcept { return 1 + 2 * splits.size(); }

  /// L2 norms |c| * sqrt(|W|) in canonical order: root, then (+, -) per split.
  std::vector<double> norms() const;
};

WaveletDecomposition decompose(const BwpTree& tree, const Signal& f);

/// Same decomposition computed from the leaf means of the tree.
WaveletDecomposition decompose_leaf_means(const BwpTree& tree, std::span<const double> leaf_means);

/// Rebuilds the decomposition from the root and the c+ of each split;
/// c- follows from c+ |W+| + c- |W-| = 0.
WaveletDecomposition decomposition_from_plus(const BwpTree& tree, double root, std::span<const double> c_plus);

/// W_M f: each vertex takes the mean of its leaf.
Signal reconstruct_means(const BwpTree& tree, std::span<const double> leaf_means);

/// Progressive sum of wavelets. With `mterm`, only the m wavelets of largest
/// L2 norm contribute (ties: earlier level first, + before -).
Signal reconstruct_wavelets(const BwpTree& tree, const WaveletDecomposition& dec,
                            std::optional<std::size_t> mterm = std::nullopt);

/// Canonical wavelet indices ordered by descending L2 norm.
std::vector<std::size_t> wavelet_order(const WaveletDecomposition& dec);

/// ||f - S_m(f)||_2 for the best m-term approximation on this tree.
double m_term_error(const BwpTree& tree, const Signal& f, std::size_t m);

/// (sum over all wavelets of ||psi_W||_2^r)^(1/r).
double r_energy(const WaveletDecomposition& dec, double r);
double r_energy(const BwpTree& tree, const Signal& f, double r);

/// (sum_W |W|^(-alpha r) sup_{w in W} sum_{v in W} |f(v) - f(w)|^r)^(1/r),
/// summed over all tree nodes. Requires 1/r = alpha + 1/2.
double mr_functional(const BwpTree& tree, const Signal& f, double alpha, double r);

/// Throws RangeError unless 1/r = alpha + 1/2 (within 1e-12).
void check_smoothness_relation(double alpha, double r);

struct JacksonRow {
  int mu = 0;
  std::size_t m = 0;
  double error = 0.0;  // ||f - S_m f||_2
  double bound = 0.0;  // C m^-alpha N_r
  bool holds = false;
};

struct JacksonReport {
  double r = 0.0;
  double alpha = 0.0;
  double rho = 0.0;
  double constant = 0.0;  // 2 (1 - rho^(1/2))^(-1/2)
  double n_r = 0.0;
  double norm_f = 0.0;
  std::vector<JacksonRow> rows;
  bool norm_bound_holds = false;  // ||f||_2 <= (C + 1) N_r
  /// Only for r <= 1: M_r <= (rho^(alpha r) / (1 - rho^(alpha r)))^(1/r) N_r.
  std::optional<double> m_r;
  std::optional<double> m_r_bound;
  bool m_r_holds = true;

  bool all_hold() const;
};

/// Checks the m-term Jackson inequality with its explicit constant at every
/// dyadic block size m(mu) = #{W : ||psi_W|| >= 2^-mu N_r}, together with the
/// norm bound and (for r <= 1) the upper M_r estimate. The tree must be
/// complete; rho is measured from the tree.
JacksonReport jackson_check(const BwpTree& tree, const Signal& f, double r);

}  // namespace gw
