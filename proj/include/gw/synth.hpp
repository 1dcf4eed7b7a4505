#pragma once

#include <cstdint>

#include "gw/graph.hpp"
#include "gw/imaging.hpp"

namespace gw {

/// 2 chi_{x < threshold} - 1 on the first coordinate.
Signal halfplane_indicator(const Graph& g, double threshold);

/// f(v) + alpha (x_v - mean x).
Signal gradient_blend(const Graph& g, const Signal& f, double alpha);

/// i.i.d. uniform values on [lo, hi).
Signal random_signal(std::size_t n, std::uint64_t seed, double lo = 0.0, double hi = 1.0);

/// Piecewise-constant image cut by the diagonal lines x + y = a and
/// x - y = b: three regions with distinct intensities, offsets drawn from seed.
GrayImage diagonal_wedge_image(std::size_t width, std::size_t height, std::uint64_t seed);

}  // namespace gw
