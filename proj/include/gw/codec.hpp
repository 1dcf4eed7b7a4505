#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gw/bwp_tree.hpp"
#include "gw/encoder.hpp"
#include "gw/metric.hpp"

namespace gw {

// Bitstream layout, little-endian header followed by an MSB-first bit field:
//
//   "BWPC" | version u8 = 1 | mode u8 | strategy u8 | metric u8 | n u32 |
//   M u32 | K u16 | lo f64 | hi f64 | q1 u32            (38 bytes)
//   q_2 .. q_M   at ceil(log2 n) bits each
//   M codes      at ceil(log2 K) bits each
//   zero padding to the next byte
//
// Bit 7 of the metric byte flags induced-subgraph path distances.

inline constexpr std::array<std::uint8_t, 4> kMagic = {'B', 'W', 'P', 'C'};
inline constexpr std::uint8_t kFormatVersion = 1;
inline constexpr std::size_t kHeaderBytes = 38;
inline constexpr std::uint8_t kInducedFlag = 0x80;

enum class ValueMode : std::uint8_t { Means = 0, Wavelets = 1 };

struct QuantizerParams {
  std::uint32_t levels = 256;  // K
  double lo = 0.0;
  double hi = 0.0;

  double step() const noexcept { return hi > lo ? (hi - lo) / static_cast<double>(levels - 1) : 0.0; }
  double dequantize(std::uint32_t code) const noexcept { return lo + static_cast<double>(code) * step(); }
  /// Largest reconstruction error of any in-range value.
  double max_error() const noexcept { return step() / 2.0; }

  friend bool operator==(const QuantizerParams&, const QuantizerParams&) = default;
};

struct Quantized {
  std::vector<std::uint32_t> codes;
  QuantizerParams params;
};

/// Uniform mid-tread quantizer over [min, max] of the values with K levels.
Quantized quantize(std::span<const double> values, std::uint32_t levels);
std::vector<double> dequantize(const Quantized& q);

/// Smallest b with 2^b >= x (0 for x <= 1).
unsigned bits_for(std::uint64_t x);

/// Bits of the packed section: (M - 1) centers plus M codes.
std::uint64_t packed_payload_bits(std::uint64_t n, std::uint64_t M, std::uint64_t K);
/// Center-and-value information counting q1 as well: M (ceil(log2 n) + ceil(log2 K)).
std::uint64_t center_value_bits(std::uint64_t n, std::uint64_t M, std::uint64_t K);
/// ceil(log2 n + log2 K) * M / n.
double bits_per_node(std::uint64_t n, std::uint64_t M, std::uint64_t K);

struct StreamHeader {
  ValueMode mode = ValueMode::Means;
  StrategyKind strategy = StrategyKind::FullyAdaptive;
  MetricKind metric = MetricKind::Hop;
  MetricScope scope = MetricScope::Global;
  std::uint32_t n = 0;
  std::uint32_t M = 0;
  QuantizerParams quantizer;
  std::uint32_t q1 = 0;

  friend bool operator==(const StreamHeader&, const StreamHeader&) = default;
};

/// Header, centers and codes exactly as stored.
struct EncodedSignal {
  StreamHeader header;
  std::vector<Vertex> centers;  // all M, q1 first
  std::vector<std::uint32_t> codes;

  friend bool operator==(const EncodedSignal&, const EncodedSignal&) = default;
};

std::vector<std::uint8_t> write_stream(const EncodedSignal& s);
/// Throws ParseError on bad magic/version, truncated or oversized payload,
/// nonzero padding, out-of-range centers or codes and repeated centers.
EncodedSignal read_stream(std::span<const std::uint8_t> bytes);

/// Values stored for a tree: leaf means, or the root coefficient followed by
/// the c+ of every split.
std::vector<double> stream_values(const BwpTree& tree, const Signal& f, ValueMode mode);

struct StreamOptions {
  ValueMode mode = ValueMode::Means;
  StrategyKind strategy = StrategyKind::FullyAdaptive;
  std::uint32_t levels = 256;
};

/// Quantizes `values` (length M) and packs them with the tree's centers.
std::vector<std::uint8_t> serialize(const BwpTree& tree, const Metric& metric, std::span<const double> values,
                                    const StreamOptions& opts);

struct DecodedSignal {
  BwpTree tree;
  EncodedSignal stream;
  std::vector<double> values;  // dequantized

  /// Reconstruction W_M f, or the best m-term approximation when mterm is set.
  Signal reconstruct(std::optional<std::size_t> mterm = std::nullopt) const;
};

/// Parses the stream and rebuilds the tree from its centers. The metric
/// must match the stream's n, metric tag and scope.
DecodedSignal deserialize(std::span<const std::uint8_t> bytes, const Metric& metric);

}  // namespace gw
