#include "gw/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "gw/errors.hpp"
#include "text_util.hpp"

namespace gw {

Graph::Graph(std::size_t n, std::span<const Edge> edges,
             std::optional<std::vector<Point>> coords,
             std::optional<GridShape> grid)
    : coords_(std::move(coords)), grid_(grid) {
  if (n == 0) throw InvariantError("graph must have at least one vertex");
  if (n > UINT32_MAX) throw RangeError("graph too large");
  if (coords_ && coords_->size() != n)
    throw InvariantError("coordinate count does not match vertex count");
  if (grid_ && std::size_t{grid_->width} * grid_->height != n)
    throw InvariantError("grid shape does not match vertex count");

  std::vector<std::size_t> degree(n, 0);
  for (const auto& e : edges) {
    if (e.u >= n || e.v >= n)
      throw InvariantError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                           ") references a vertex >= n");
    if (e.u == e.v) throw InvariantError("self-loop at vertex " + std::to_string(e.u));
    if (!(e.weight > 0.0) || !std::isfinite(e.weight))
      throw InvariantError("edge weights must be finite and strictly positive");
    ++degree[e.u];
    ++degree[e.v];
  }
  offsets_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) offsets_[v + 1] = offsets_[v] + degree[v];
  targets_.resize(offsets_[n]);
  weights_.resize(offsets_[n]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& e : edges) {
    targets_[fill[e.u]] = e.v;
    weights_[fill[e.u]++] = e.weight;
    targets_[fill[e.v]] = e.u;
    weights_[fill[e.v]++] = e.weight;
  }
  // Sort each adjacency row and reject duplicates.
  std::vector<std::pair<Vertex, double>> row;
  for (std::size_t v = 0; v < n; ++v) {
    row.clear();
    for (std::size_t k = offsets_[v]; k < offsets_[v + 1]; ++k) row.emplace_back(targets_[k], weights_[k]);
    std::sort(row.begin(), row.end());
    for (std::size_t k = 1; k < row.size(); ++k)
      if (row[k].first == row[k - 1].first)
        throw InvariantError("duplicate edge (" + std::to_string(v) + "," +
                             std::to_string(row[k].first) + ")");
    for (std::size_t k = 0; k < row.size(); ++k) {
      targets_[offsets_[v] + k] = row[k].first;
      weights_[offsets_[v] + k] = row[k].second;
    }
  }
  if (!is_connected(n, edges)) throw InvariantError("graph is not connected");
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (Vertex u = 0; u < size(); ++u) {
    auto nb = neighbors(u);
    auto w = weights(u);
    for (std::size_t k = 0; k < nb.size(); ++k)
      if (u < nb[k]) out.push_back({u, nb[k], w[k]});
  }
  return out;
}

Graph Graph::with_coords(std::vector<Point> coords) const {
  auto e = edges();
  return Graph(size(), e, std::move(coords), grid_);
}

bool is_connected(std::size_t n, std::span<const Edge> edges) {
  if (n <= 1) return true;
  std::vector<std::vector<Vertex>> adj(n);
  for (const auto& e : edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  std::vector<char> seen(n, 0);
  std::vector<Vertex> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    for (Vertex w : adj[v])
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
  }
  return reached == n;
}

Graph parse_edge_list(std::string_view text) {
  detail::LineReader lines(text);
  std::string_view line;
  if (!lines.next_data_line(line)) throw ParseError("edge list: missing `n m` header line");
  auto header = detail::split_ws(line);
  if (header.size() != 2)
    throw ParseError("edge list line " + std::to_string(lines.line_no()) + ": expected `n m`");
  auto n = detail::parse_uint(header[0], "vertex count", lines.line_no());
  auto m = detail::parse_uint(header[1], "edge count", lines.line_no());

  std::vector<Edge> edges;
  edges.reserve(m);
  while (lines.next_data_line(line)) {
    auto tok = detail::split_ws(line);
    if (tok.size() != 2 && tok.size() != 3)
      throw ParseError("edge list line " + std::to_string(lines.line_no()) + ": expected `i j [w]`");
    Edge e;
    auto i = detail::parse_uint(tok[0], "vertex id", lines.line_no());
    auto j = detail::parse_uint(tok[1], "vertex id", lines.line_no());
    if (i >= n || j >= n)
      throw ParseError("edge list line " + std::to_string(lines.line_no()) + ": vertex id >= n");
    e.u = static_cast<Vertex>(i);
    e.v = static_cast<Vertex>(j);
    if (tok.size() == 3) e.weight = detail::parse_double(tok[2], "edge weight", lines.line_no());
    edges.push_back(e);
  }
  if (edges.size() != m)
    throw ParseError("edge list: header announces " + std::to_string(m) + " edges, found " +
                     std::to_string(edges.size()));
  return Graph(n, edges);
}

Graph load_graph(const std::string& path) { return parse_edge_list(detail::read_file(path)); }

void write_edge_list(std::ostream& out, const Graph& g) {
  auto edges = g.edges();
  bool weighted = std::any_of(edges.begin(), edges.end(), [](const Edge& e) { return e.weight != 1.0; });
  out << g.size() << ' ' << edges.size() << '\n';
  for (const auto& e : edges) {
    out << e.u << ' ' << e.v;
    if (weighted) out << ' ' << detail::format_double(e.weight);
    out << '\n';
  }
}

Signal parse_signal(std::string_view text, std::size_t expected_size) {
  detail::LineReader lines(text);
  std::string_view line;
  Signal f;
  f.reserve(expected_size);
  while (lines.next_data_line(line)) {
    auto tok = detail::split_ws(line);
    if (tok.size() != 1)
      throw ParseError("signal line " + std::to_string(lines.line_no()) + ": expected one value");
    f.push_back(detail::parse_double(tok[0], "signal value", lines.line_no()));
  }
  if (f.size() != expected_size)
    throw ParseError("signal has " + std::to_string(f.size()) + " values, graph has " +
                     std::to_string(expected_size) + " vertices");
  return f;
}

Signal load_signal(const std::string& path, std::size_t expected_size) {
  return parse_signal(detail::read_file(path), expected_size);
}

void write_signal(std::ostream& out, const Signal& f) {
  for (double v : f) out << detail::format_double(v) << '\n';
}

std::vector<Point> parse_coords(std::string_view text, std::size_t expected_size) {
  detail::LineReader lines(text);
  std::string_view line;
  std::vector<Point> pts;
  while (lines.next_data_line(line)) {
    auto tok = detail::split_ws(line);
    if (tok.size() != 2)
      throw ParseError("coords line " + std::to_string(lines.line_no()) + ": expected `x y`");
    pts.push_back({detail::parse_double(tok[0], "x", lines.line_no()),
                   detail::parse_double(tok[1], "y", lines.line_no())});
  }
  if (pts.size() != expected_size)
    throw ParseError("coords file has " + std::to_string(pts.size()) + " points, expected " +
                     std::to_string(expected_size));
  return pts;
}

std::vector<Point> load_coords(const std::string& path, std::size_t expected_size) {
  return parse_coords(detail::read_file(path), expected_size);
}

Graph gen_er_graph(std::size_t n, double p, std::uint64_t seed) {
  if (n < 2) throw RangeError("ER graph needs n >= 2");
  if (!(p > 0.0 && p <= 1.0)) throw RangeError("ER graph needs 0 < p <= 1");
  constexpr int kAttempts = 64;
  std::seed_seq base{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  std::vector<std::uint64_t> attempt_seeds(kAttempts);
  {
    std::mt19937_64 seeder(base);
    for (auto& s : attempt_seeds) s = seeder();
  }
  std::vector<Edge> edges;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    std::mt19937_64 rng(attempt_seeds[attempt]);
    edges.clear();
    for (Vertex i = 0; i < n; ++i)
      for (Vertex j = i + 1; j < n; ++j) {
        // 53-bit uniform in [0, 1); p == 1 always accepts.
        double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        if (u < p) edges.push_back({i, j, 1.0});
      }
    if (is_connected(n, edges)) return Graph(n, edges);
  }
  throw InvariantError("ER sample stayed disconnected after 64 attempts");
}

Graph gen_grid_graph(std::size_t width, std::size_t height) {
  if (width == 0 || height == 0) throw RangeError("grid dimensions must be >= 1");
  const std::size_t n = width * height;
  std::vector<Edge> edges;
  edges.reserve(2 * n);
  std::vector<Point> coords(n);
  for (std::size_t y = 0; y < height; ++y)
    for (std::size_t x = 0; x < width; ++x) {
      auto v = static_cast<Vertex>(y * width + x);
      coords[v] = {static_cast<double>(x), static_cast<double>(y)};
      if (x + 1 < width) edges.push_back({v, v + 1, 1.0});
      if (y + 1 < height) edges.push_back({v, static_cast<Vertex>(v + width), 1.0});
    }
  return Graph(n, edges, std::move(coords),
               GridShape{static_cast<std::uint32_t>(width), static_cast<std::uint32_t>(height)});
}

}  // namespace gw
