#include "gw/synth.hpp"

#include <cmath>
#include <random>

#include "gw/detail/compensated_sum.hpp"
#include "gw/errors.hpp"

namespace gw {

Signal halfplane_indicator(const Graph& g, double threshold) {
  if (!g.has_coords()) throw InvariantError("indicator signal needs vertex coordinates");
  Signal f(g.size());
  for (Vertex v = 0; v < g.size(); ++v) f[v] = g.coord(v)[0] < threshold ? 1.0 : -1.0;
  return f;
}

Signal gradient_blend(const Graph& g, const Signal& f, double alpha) {
  if (!g.has_coords()) throw InvariantError("gradient blend needs vertex coordinates");
  if (f.size() != g.size()) throw InvariantError("signal length does not match the graph");
  detail::CompensatedSum s;
  for (Vertex v = 0; v < g.size(); ++v) s.add(g.coord(v)[0]);
  const double mean_x = s.value() / static_cast<double>(g.size());
  Signal out(f.size());
  for (Vertex v = 0; v < g.size(); ++v) out[v] = f[v] + alpha * (g.coord(v)[0] - mean_x);
  return out;
}

Signal random_signal(std::size_t n, std::uint64_t seed, double lo, double hi) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  Signal f(n);
  for (auto& x : f) x = dist(rng);
  return f;
}

GrayImage diagonal_wedge_image(std::size_t width, std::size_t height, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto w = static_cast<long long>(width), h = static_cast<long long>(height);
  std::uniform_int_distribution<long long> da((w + h) / 3, 2 * (w + h) / 3);
  std::uniform_int_distribution<long long> db(-w / 4, w / 4);
  const long long a = da(rng), b = db(rng);
  std::uniform_int_distribution<int> dv(0, 255);
  double v0 = dv(rng), v1 = dv(rng), v2 = dv(rng);
  if (v1 == v0) v1 = 255 - v0;
  if (v2 == v1 || v2 == v0) v2 = std::fmod(v0 + v1 + 85.0, 256.0);
  GrayImage img(width, height);
  for (long long y = 0; y < h; ++y)
    for (long long x = 0; x < w; ++x)
      img.at(x, y) = x + y < a ? v0 : (x - y < b ? v1 : v2);
  return img;
}

}  // namespace gw
