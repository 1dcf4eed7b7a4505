#include "gw/bwp_tree.hpp"

#include <algorithm>
#include <string>

#include "gw/errors.hpp"

namespace gw {

BwpTree::BwpTree(std::size_t n, Vertex q1) {
  if (n == 0) throw InvariantError("tree needs a nonempty vertex set");
  if (q1 >= n) throw InvariantError("initial center " + std::to_string(q1) + " is not a vertex");
  centers_.push_back(q1);
  TreeNode root;
  root.size = n;
  nodes_.push_back(root);
  leaves_.push_back(Subset::all(n));
  leaf_node_.push_back(0);
  owner_.assign(n, 0);
}

void BwpTree::refine(const Metric& metric, std::size_t j, Vertex q) {
  if (metric.graph().size() != vertex_count()) throw InvariantError("metric and tree sizes differ");
  if (j >= centers_.size()) throw RangeError("subset index out of range");
  const Subset& target = leaves_[j];
  if (target.size() < 2) throw InvariantError("cannot split a singleton subset");
  if (q >= vertex_count() || owner_[q] != j)
    throw InvariantError("new center " + std::to_string(q) + " is not in the subset being split");
  if (q == centers_[j]) throw InvariantError("new center equals the subset's own center");

  auto [plus, minus] = wedge_assign(metric, target, centers_[j], q);

  const auto parent = leaf_node_[j];
  const auto level = static_cast<std::uint32_t>(centers_.size() + 1);
  const auto new_index = static_cast<std::uint32_t>(centers_.size());
  const auto plus_id = static_cast<std::uint32_t>(nodes_.size());
  const auto minus_id = plus_id + 1;

  TreeNode p;
  p.size = plus.size();
  p.parent = static_cast<std::int32_t>(parent);
  p.center = static_cast<std::uint32_t>(j);
  p.level = level;
  TreeNode m = p;
  m.size = minus.size();
  m.center = new_index;
  nodes_.push_back(p);
  nodes_.push_back(m);
  nodes_[parent].plus_child = static_cast<std::int32_t>(plus_id);
  nodes_[parent].minus_child = static_cast<std::int32_t>(minus_id);

  for (Vertex v : minus) owner_[v] = new_index;
  splits_.push_back({static_cast<std::uint32_t>(j), new_index, parent, plus_id, minus_id});
  centers_.push_back(q);
  leaves_[j] = std::move(plus);
  leaves_.push_back(std::move(minus));
  leaf_node_[j] = plus_id;
  leaf_node_.push_back(minus_id);
}

Subset BwpTree::node_members(std::size_t node) const {
  if (node >= nodes_.size()) throw RangeError("node id out of range");
  std::vector<Vertex> out;
  out.reserve(nodes_[node].size);
  std::vector<std::size_t> stack{node};
  while (!stack.empty()) {
    auto id = stack.back();
    stack.pop_back();
    const auto& nd = nodes_[id];
    if (nd.is_leaf()) {
      const auto& s = leaves_[nd.center];
      out.insert(out.end(), s.begin(), s.end());
    } else {
      stack.push_back(static_cast<std::size_t>(nd.plus_child));
      stack.push_back(static_cast<std::size_t>(nd.minus_child));
    }
  }
  std::sort(out.begin(), out.end());
  return Subset::adopt(std::move(out));
}

std::vector<std::vector<Vertex>> BwpTree::all_node_members() const {
  std::vector<std::vector<Vertex>> out(nodes_.size());
  for (std::size_t id = 0; id < nodes_.size(); ++id) out[id].reserve(nodes_[id].size);
  for (Vertex v = 0; v < owner_.size(); ++v) {
    auto id = static_cast<std::int32_t>(leaf_node_[owner_[v]]);
    for (; id != kNoNode; id = nodes_[static_cast<std::size_t>(id)].parent)
      out[static_cast<std::size_t>(id)].push_back(v);
  }
  return out;
}

BwpTree tree_from_centers(const Metric& metric, std::span<const Vertex> centers) {
  const std::size_t n = metric.graph().size();
  if (centers.empty()) throw InvariantError("center list is empty");
  if (centers.size() > n) throw InvariantError("more centers than vertices");
  std::vector<char> used(n, 0);
  for (Vertex q : centers) {
    if (q >= n) throw InvariantError("center " + std::to_string(q) + " is not a vertex");
    if (used[q]) throw InvariantError("center " + std::to_string(q) + " is repeated");
    used[q] = 1;
  }
  BwpTree tree(n, centers[0]);
  for (std::size_t k = 1; k < centers.size(); ++k) {
    // Every non-center lies in a subset whose center differs from it, so the
    // located subset always has at least two members.
    tree.refine(metric, tree.owner(centers[k]), centers[k]);
  }
  return tree;
}

PartitionLevel partition_at(const BwpTree& tree, std::size_t m) {
  if (m < 1 || m > tree.center_count()) throw RangeError("partition level out of range");
  auto nodes = tree.nodes();
  std::vector<std::vector<Vertex>> sets(m);
  for (Vertex v = 0; v < tree.vertex_count(); ++v) {
    auto id = tree.leaf_node(tree.owner(v));
    while (nodes[id].level > m) id = static_cast<std::size_t>(nodes[id].parent);
    sets[nodes[id].center].push_back(v);
  }
  PartitionLevel out;
  out.m = m;
  out.sets.reserve(m);
  for (auto& s : sets) out.sets.push_back(Subset::adopt(std::move(s)));
  return out;
}

double balance_ratio(const BwpTree& tree) {
  if (tree.splits().empty()) throw InvariantError("balance ratio needs at least one split");
  auto nodes = tree.nodes();
  double rho = 0.0;
  for (const auto& s : tree.splits()) {
    double whole = static_cast<double>(nodes[s.parent].size);
    double larger = static_cast<double>(std::max(nodes[s.plus].size, nodes[s.minus].size));
    rho = std::max(rho, larger / whole);
  }
  return rho;
}

Signal wedgelet_indicator(const BwpTree& tree, std::size_t m, std::size_t i) {
  if (m < 1 || m > tree.center_count() || i >= m) throw RangeError("wedgelet index out of range");
  auto nodes = tree.nodes();
  Signal out(tree.vertex_count(), 0.0);
  for (Vertex v = 0; v < tree.vertex_count(); ++v) {
    auto id = tree.leaf_node(tree.owner(v));
    while (nodes[id].level > m) id = static_cast<std::size_t>(nodes[id].parent);
    if (nodes[id].center == i) out[v] = 1.0;
  }
  return out;
}

}  // namespace gw
