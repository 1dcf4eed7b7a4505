#pragma once

#include <cstdint>
#include <vector>

#include "gw/graph.hpp"

namespace gw {

/// A general dyadic split of a vertex set, sets encoded as bit masks.
struct MaskSplit {
  std::uint32_t parent = 0;
  std::uint32_t first = 0;   // contains the lowest vertex of `parent`
  std::uint32_t second = 0;
};

/// Complete binary partitioning tree over at most 32 vertices.
struct MaskTree {
  std::size_t n = 0;
  std::vector<MaskSplit> splits;  // preorder

  /// All sets of the tree: root followed by both children of every split.
  std::vector<std::uint32_t> sets() const;
  bool complete() const;
  bool balanced(double rho) const;
};

struct BesovResult {
  /// Infimum over complete rho-balanced trees of the Besov-type functional
  /// (sum_W |W|^(-alpha r) sup_w sum_v |f(v) - f(w)|^r)^(1/r). +inf if no
  /// such tree exists.
  double seminorm = 0.0;
  MaskTree seminorm_tree;
  /// Infimum of the r-energy N_r over the same family of trees.
  double min_r_energy = 0.0;
  MaskTree r_energy_tree;
  bool feasible = false;

  /// seminorm / min_r_energy (reported, no known constant to compare with).
  double ratio() const;
};

/// Exhaustive search over all complete, rho-balanced binary partitioning
/// trees with arbitrary dyadic splits (memoized over vertex subsets, about
/// 3^n work). Requires n <= max_n <= 20, 1/2 <= rho < 1, 1/r = alpha + 1/2.
BesovResult besov_oracle(const Graph& graph, const Signal& f, double alpha, double r, double rho,
                         std::size_t max_n = 8);

/// Balance test (1 - rho)|W| <= |W'| <= rho |W| with a small tolerance.
bool split_is_balanced(std::size_t whole, std::size_t part, double rho);

}  // namespace gw
