#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "gw/graph.hpp"
#include "gw/subset.hpp"

namespace gw {

enum class MetricKind : std::uint8_t { Hop = 0, WeightedPath = 1, CoordL1 = 2, CoordL2 = 3, CoordLinf = 4 };

/// Whether subset distances use the whole graph or only the subset's
/// induced subgraph (path metrics only; coordinate metrics ignore this).
enum class MetricScope : std::uint8_t { Global, Induced };

MetricKind parse_metric_kind(std::string_view name);
std::string_view metric_name(MetricKind kind);
constexpr bool is_path_metric(MetricKind k) { return k == MetricKind::Hop || k == MetricKind::WeightedPath; }

/// Vertex distance evaluator bound to a graph.
///
/// The graph must outlive the metric. Path metrics on graphs with at most
/// `kAllPairsLimit` vertices precompute an all-pairs table at construction;
/// larger graphs run BFS/Dijkstra per query, stopping as soon as every
/// requested target is settled. All queries are const and thread-safe.
class Metric {
 public:
  static constexpr std::size_t kAllPairsLimit = 4096;

  Metric(const Graph& graph, MetricKind kind, MetricScope scope = MetricScope::Global);

  const Graph& graph() const noexcept { return *graph_; }
  MetricKind kind() const noexcept { return kind_; }
  MetricScope scope() const noexcept { return scope_; }

  /// Distance on the whole graph (the scope does not apply).
  double distance(Vertex u, Vertex v) const;

  /// out[k] = d(source, members[k]). With Induced scope and a path metric,
  /// shortest paths are restricted to `members` (unreachable -> +inf).
  void distances_from(Vertex source, std::span<const Vertex> members, std::span<double> out) const;
  std::vector<double> distances_from(Vertex source, std::span<const Vertex> members) const;

 private:
  void shortest_paths(Vertex source, std::span<const Vertex> members, std::span<double> out,
                      bool restrict_to_members) const;
  double coord_distance(Vertex u, Vertex v) const;

  const Graph* graph_;
  MetricKind kind_;
  MetricScope scope_;
  std::shared_ptr<const std::vector<double>> table_;  // n*n, row-major, path metrics only
};

/// Wedge split of `subset` anchored at (plus, minus):
///   plus side  = {v : d(v, plus) <= d(v, minus)},  minus side = the rest.
/// Throws InvariantError if plus == minus, an anchor is outside the subset,
/// or the metric fails to separate the anchors.
std::pair<Subset, Subset> wedge_assign(const Metric& metric, const Subset& subset, Vertex plus, Vertex minus);

}  // namespace gw
