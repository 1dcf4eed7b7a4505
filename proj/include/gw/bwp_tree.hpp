#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gw/graph.hpp"
#include "gw/metric.hpp"
#include "gw/subset.hpp"

namespace gw {

// Conventions used throughout: partition levels `m` are 1-based (level m has
// m sets, level 1 is {V}); center indices `i` are 0-based positions in Q.

inline constexpr std::int32_t kNoNode = -1;

struct TreeNode {
  std::size_t size = 0;
  std::int32_t parent = kNoNode;
  std::int32_t plus_child = kNoNode;   // keeps the center of this node
  std::int32_t minus_child = kNoNode;  // takes the newly added center
  std::uint32_t center = 0;            // center index associated with the node
  std::uint32_t level = 1;             // partition level at which it appeared

  bool is_leaf() const noexcept { return plus_child == kNoNode; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

/// One wedge split: the subset of center `j` was split by (q_j, q_m).
struct SplitRecord {
  std::uint32_t j = 0;
  std::uint32_t m = 0;
  std::uint32_t parent = 0;
  std::uint32_t plus = 0;
  std::uint32_t minus = 0;
  friend bool operator==(const SplitRecord&, const SplitRecord&) = default;
};

/// Binary wedge partitioning tree, fully determined by its center sequence.
///
/// Keeps the current leaf partition as sorted subsets plus a vertex -> leaf
/// index so that locating the subset containing a vertex is O(1). Interior
/// node membership is not stored; it is recovered from the leaves on demand.
class BwpTree {
 public:
  /// Single-node tree {V} anchored at q1.
  BwpTree(std::size_t n, Vertex q1);

  /// Wedge-splits the leaf of center j by (q_j, q). Requires the leaf to
  /// contain q and q != q_j; throws InvariantError otherwise.
  void refine(const Metric& metric, std::size_t j, Vertex q);

  std::size_t vertex_count() const noexcept { return owner_.size(); }
  std::size_t center_count() const noexcept { return centers_.size(); }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  bool complete() const noexcept { return centers_.size() == owner_.size(); }

  std::span<const Vertex> centers() const noexcept { return centers_; }
  std::span<const TreeNode> nodes() const noexcept { return nodes_; }
  std::span<const SplitRecord> splits() const noexcept { return splits_; }

  /// Current leaves V_{q_i}^{(M)}, indexed by center index.
  std::span<const Subset> leaves() const noexcept { return leaves_; }
  const Subset& leaf(std::size_t i) const { return leaves_.at(i); }
  std::size_t leaf_node(std::size_t i) const { return leaf_node_.at(i); }

  /// Center index of the leaf containing v.
  std::size_t owner(Vertex v) const { return owner_.at(v); }

  /// Members of an arbitrary tree node (union of the leaves below it).
  Subset node_members(std::size_t node) const;

  /// Members of every node, indexed by node id. O(n * depth).
  std::vector<std::vector<Vertex>> all_node_members() const;

  friend bool operator==(const BwpTree&, const BwpTree&) = default;

 private:
  std::vector<Vertex> centers_;
  std::vector<TreeNode> nodes_;
  std::vector<SplitRecord> splits_;
  std::vector<Subset> leaves_;
  std::vector<std::uint32_t> leaf_node_;
  std::vector<std::uint32_t> owner_;
};

/// Rebuilds the tree of an ordered center list. Throws InvariantError on a
/// repeated or out-of-range center.
BwpTree tree_from_centers(const Metric& metric, std::span<const Vertex> centers);

/// Partition P^{(m)}: sets[i] = V_{q_i}^{(m)} for i < m.
struct PartitionLevel {
  std::size_t m = 0;
  std::vector<Subset> sets;
};

PartitionLevel partition_at(const BwpTree& tree, std::size_t m);

/// max over all children W' of max(|W'|, |W| - |W'|) / |W|. Needs >= 1 split.
double balance_ratio(const BwpTree& tree);

/// 0/1 indicator of V_{q_i}^{(m)} (a wedgelet).
Signal wedgelet_indicator(const BwpTree& tree, std::size_t m, std::size_t i);

}  // namespace gw
