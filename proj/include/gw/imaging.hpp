#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gw/bwp_tree.hpp"
#include "gw/graph.hpp"

namespace gw {

/// Row-major grayscale image with intensities nominally in [0, 255].
struct GrayImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<double> pixels;

  GrayImage() = default;
  GrayImage(std::size_t w, std::size_t h, double fill = 0.0);

  std::size_t size() const noexcept { return pixels.size(); }
  double& at(std::size_t x, std::size_t y) { return pixels[y * width + x]; }
  double at(std::size_t x, std::size_t y) const { return pixels[y * width + x]; }
};

/// Binary PGM (P5, maxval <= 255).
GrayImage parse_pgm(const std::string& bytes);
GrayImage load_pgm(const std::string& path);
/// Writes P5 with values rounded and clamped to [0, 255].
void save_pgm(const std::string& path, const GrayImage& image);
std::string encode_pgm(const GrayImage& image);

/// PGM by magic, PNG when built with libpng (colour converted to luminance).
GrayImage load_image(const std::string& path);

struct ImageGraph {
  Graph graph;
  Signal signal;
};

/// 4-neighbour grid graph with pixel coordinates and intensities as signal.
ImageGraph image_to_signal(const GrayImage& image);
GrayImage signal_to_image(const Signal& f, std::size_t width, std::size_t height);

double mse(const GrayImage& a, const GrayImage& b);
/// 10 log10(255^2 / MSE); +inf for identical images.
double psnr(const GrayImage& a, const GrayImage& b);

struct QuadBlock {
  std::size_t x = 0, y = 0, width = 0, height = 0;
  double mean = 0.0;
  double sse = 0.0;
};

struct QuadTree {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<QuadBlock> leaves;

  GrayImage render() const;
  double total_sse() const;
};

/// Greedy quadtree: split the leaf with largest squared error until at least
/// `target_blocks` leaves exist or every leaf is exact. Odd sides are split
/// floor/ceil, blocks one pixel thin are split in two.
QuadTree quadtree_encode(const GrayImage& image, std::size_t target_blocks);

/// Orthonormal dyadic 2D Haar transform on the zero-padded power-of-two
/// square (at most 6 levels). Coefficients are stored in place.
struct HaarTransform {
  std::size_t side = 0;
  std::size_t levels = 0;
  std::vector<double> coeffs;
};
HaarTransform haar2d_forward(const GrayImage& image);
GrayImage haar2d_inverse(const HaarTransform& t, std::size_t width, std::size_t height);
/// Keeps the m largest-magnitude coefficients (ties to the lower index).
GrayImage haar2d_topm(const GrayImage& image, std::size_t m);

/// Region label image of the tree leaves on a grid graph. Label i is drawn
/// as gray level (73 i) mod 256.
GrayImage render_partition(const BwpTree& tree, const Graph& grid_graph);
/// |a - b| per pixel.
GrayImage render_details(const GrayImage& a, const GrayImage& b);

}  // namespace gw
