#include "gw/metric.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>
#include <string>

#include "gw/errors.hpp"

namespace gw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

MetricKind parse_metric_kind(std::string_view name) {
  if (name == "hop") return MetricKind::Hop;
  if (name == "wpath") return MetricKind::WeightedPath;
  if (name == "l1") return MetricKind::CoordL1;
  if (name == "l2") return MetricKind::CoordL2;
  if (name == "linf") return MetricKind::CoordLinf;
  throw RangeError("unknown metric '" + std::string(name) + "'");
}

std::string_view metric_name(MetricKind kind) {
  switch (kind) {
    case MetricKind::Hop: return "hop";
    case MetricKind::WeightedPath: return "wpath";
    case MetricKind::CoordL1: return "l1";
    case MetricKind::CoordL2: return "l2";
    case MetricKind::CoordLinf: return "linf";
  }
  return "?";
}

Metric::Metric(const Graph& graph, MetricKind kind, MetricScope scope)
    : graph_(&graph), kind_(kind), scope_(scope) {
  const std::size_t n = graph.size();
  if (!is_path_metric(kind)) {
    if (!graph.has_coords())
      throw InvariantError(std::string("metric '") + std::string(metric_name(kind)) +
                           "' needs vertex coordinates");
    return;
  }
  if (n <= kAllPairsLimit) {
    auto table = std::make_shared<std::vector<double>>(n * n);
    auto all = Subset::all(n);
    for (Vertex s = 0; s < n; ++s)
      shortest_paths(s, all.members(), std::span<double>(table->data() + std::size_t{s} * n, n), false);
    table_ = std::move(table);
  }
}

double Metric::coord_distance(Vertex u, Vertex v) const {
  const auto& a = graph_->coord(u);
  const auto& b = graph_->coord(v);
  double dx = std::abs(a[0] - b[0]);
  double dy = std::abs(a[1] - b[1]);
  switch (kind_) {
    case MetricKind::CoordL1: return dx + dy;
    case MetricKind::CoordL2: return std::hypot(dx, dy);
    case MetricKind::CoordLinf: return std::max(dx, dy);
    default: return kInf;
  }
}

double Metric::distance(Vertex u, Vertex v) const {
  const std::size_t n = graph_->size();
  if (u >= n || v >= n) throw RangeError("vertex id out of range");
  if (!is_path_metric(kind_)) return coord_distance(u, v);
  if (table_) return (*table_)[std::size_t{u} * n + v];
  double d = 0.0;
  Vertex target[1] = {v};
  shortest_paths(u, target, std::span<double>(&d, 1), false);
  return d;
}

void Metric::distances_from(Vertex source, std::span<const Vertex> members, std::span<double> out) const {
  const std::size_t n = graph_->size();
  if (source >= n) throw RangeError("vertex id out of range");
  if (!is_path_metric(kind_)) {
    for (std::size_t k = 0; k < members.size(); ++k) out[k] = coord_distance(source, members[k]);
    return;
  }
  if (scope_ == MetricScope::Induced) {
    shortest_paths(source, members, out, true);
    return;
  }
  if (table_) {
    const double* row = table_->data() + std::size_t{source} * n;
    for (std::size_t k = 0; k < members.size(); ++k) out[k] = row[members[k]];
    return;
  }
  shortest_paths(source, members, out, false);
}

std::vector<double> Metric::distances_from(Vertex source, std::span<const Vertex> members) const {
  std::vector<double> out(members.size());
  distances_from(source, members, out);
  return out;
}

void Metric::shortest_paths(Vertex source, std::span<const Vertex> members, std::span<double> out,
                            bool restrict_to_members) const {
  const Graph& g = *graph_;
  const std::size_t n = g.size();
  std::vector<double> dist(n, kInf);
  // 0 = ignore, 1 = allowed (restricted mode) / target, 2 = allowed target
  std::vector<unsigned char> mark(n, restrict_to_members ? 0 : 1);
  std::size_t pending = 0;
  for (Vertex v : members) {
    if (!(mark[v] & 2)) ++pending;
    mark[v] |= 2;
    if (restrict_to_members) mark[v] |= 1;
  }
  if (restrict_to_members && !(mark[source] & 1)) {
    std::fill(out.begin(), out.end(), kInf);
    return;
  }
  auto settle = [&](Vertex v) {
    if (mark[v] & 2) {
      mark[v] &= static_cast<unsigned char>(~2u);
      --pending;
    }
  };

  dist[source] = 0.0;
  if (kind_ == MetricKind::Hop) {
    std::deque<Vertex> queue{source};
    settle(source);
    while (!queue.empty() && pending > 0) {
      Vertex v = queue.front();
      queue.pop_front();
      for (Vertex w : g.neighbors(v)) {
        if (!(mark[w] & 1) || dist[w] != kInf) continue;
        dist[w] = dist[v] + 1.0;
        settle(w);
        queue.push_back(w);
      }
    }
  } else {
    using Item = std::pair<double, Vertex>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    heap.emplace(0.0, source);
    while (!heap.empty() && pending > 0) {
      auto [d, v] = heap.top();
      heap.pop();
      if (d > dist[v]) continue;
      settle(v);
      auto nb = g.neighbors(v);
      auto wt = g.weights(v);
      for (std::size_t k = 0; k < nb.size(); ++k) {
        Vertex w = nb[k];
        if (!(mark[w] & 1)) continue;
        double nd = d + wt[k];
        if (nd < dist[w]) {
          dist[w] = nd;
          heap.emplace(nd, w);
        }
      }
    }
  }
  for (std::size_t k = 0; k < members.size(); ++k) out[k] = dist[members[k]];
}

std::pair<Subset, Subset> wedge_assign(const Metric& metric, const Subset& subset, Vertex plus, Vertex minus) {
  if (plus == minus) throw InvariantError("wedge split needs two distinct anchors");
  if (!subset.contains(plus) || !subset.contains(minus))
    throw InvariantError("wedge anchor is not a member of the subset");
  auto members = subset.members();
  auto dp = metric.distances_from(plus, members);
  auto dm = metric.distances_from(minus, members);
  std::vector<Vertex> p, m;
  p.reserve(members.size());
  for (std::size_t k = 0; k < members.size(); ++k) (dp[k] <= dm[k] ? p : m).push_back(members[k]);
  if (m.empty()) throw InvariantError("metric does not separate the wedge anchors (zero distance)");
  return {Subset::adopt(std::move(p)), Subset::adopt(std::move(m))};
}

}  // namespace gw
