#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gw {

using Vertex = std::uint32_t;
using Point = std::array<double, 2>;

struct GridShape {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
};

struct Edge {
  Vertex u = 0;
  Vertex v = 0;
  double weight = 1.0;
};

/// Undirected, connected, simple graph stored as symmetric CSR adjacency.
///
/// Instances are immutable once built; construction validates that the edge
/// set has no self-loops, no duplicates, strictly positive weights and that
/// the graph is connected.
class Graph {
 public:
  /// Throws InvariantError on any violated invariant.
  Graph(std::size_t n, std::span<const Edge> edges,
        std::optional<std::vector<Point>> coords = std::nullopt,
        std::optional<GridShape> grid = std::nullopt);

  std::size_t size() const noexcept { return offsets_.size() - 1; }
  std::size_t edge_count() const noexcept { return targets_.size() / 2; }

  std::span<const Vertex> neighbors(Vertex v) const noexcept {
    return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
  }
  std::span<const double> weights(Vertex v) const noexcept {
    return {weights_.data() + offsets_[v], weights_.data() + offsets_[v + 1]};
  }

  bool has_coords() const noexcept { return coords_.has_value(); }
  const Point& coord(Vertex v) const { return coords_->at(v); }
  const std::optional<std::vector<Point>>& coords() const noexcept { return coords_; }
  const std::optional<GridShape>& grid() const noexcept { return grid_; }

  /// Each undirected edge once, with u < v, sorted.
  std::vector<Edge> edges() const;

  /// Copy of this graph with vertex coordinates attached.
  Graph with_coords(std::vector<Point> coords) const;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<Vertex> targets_;
  std::vector<double> weights_;
  std::optional<std::vector<Point>> coords_;
  std::optional<GridShape> grid_;
};

/// Graph signal: one finite real value per vertex.
using Signal = std::vector<double>;

/// True if every vertex is reachable from vertex 0 (BFS).
bool is_connected(std::size_t n, std::span<const Edge> edges);

/// Parses the edge-list text format:
///   `#` comment lines, first data line `n m`, then m lines `i j [w]`.
Graph parse_edge_list(std::string_view text);
Graph load_graph(const std::string& path);
void write_edge_list(std::ostream& out, const Graph& g);

/// One decimal value per line, vertex order.
Signal parse_signal(std::string_view text, std::size_t expected_size);
Signal load_signal(const std::string& path, std::size_t expected_size);
void write_signal(std::ostream& out, const Signal& f);

/// Coordinates file: one `x y` pair per line, vertex order.
std::vector<Point> parse_coords(std::string_view text, std::size_t expected_size);
std::vector<Point> load_coords(const std::string& path, std::size_t expected_size);

/// Erdős–Rényi G(n, p) sample. Retries up to 64 derived seeds until the
/// sample is connected, then throws InvariantError.
Graph gen_er_graph(std::size_t n, double p, std::uint64_t seed);

/// 4-neighbour grid; vertex id = y * width + x, coords = (x, y).
Graph gen_grid_graph(std::size_t width, std::size_t height);

}  // namespace gw
