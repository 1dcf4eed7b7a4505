#include "gw/codec.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <string>

#include "gw/errors.hpp"
#include "gw/wavelets.hpp"

namespace gw {

namespace {

class ByteWriter {
 public:
  explicit ByteWriter(std::vector<std::uint8_t>& out) : out_(out) {}

  template <typename T>
  void put_le(T value) {
    std::uint64_t bits = 0;
    if constexpr (std::is_same_v<T, double>)
      bits = std::bit_cast<std::uint64_t>(value);
    else
      bits = static_cast<std::uint64_t>(value);
    for (std::size_t k = 0; k < sizeof(T); ++k) out_.push_back(static_cast<std::uint8_t>(bits >> (8 * k)));
  }

 private:
  std::vector<std::uint8_t>& out_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> in) : in_(in) {}

  template <typename T>
  T get_le() {
    if (pos_ + sizeof(T) > in_.size()) throw ParseError("bitstream header is truncated");
    std::uint64_t bits = 0;
    for (std::size_t k = 0; k < sizeof(T); ++k) bits |= std::uint64_t{in_[pos_ + k]} << (8 * k);
    pos_ += sizeof(T);
    if constexpr (std::is_same_v<T, double>)
      return std::bit_cast<double>(bits);
    else
      return static_cast<T>(bits);
  }

 private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

/// MSB-first bit packer.
class BitWriter {
 public:
  explicit BitWriter(std::vector<std::uint8_t>& out) : out_(out) {}

  void put(std::uint64_t value, unsigned width) {
    for (unsigned b = width; b-- > 0;) {
      if (used_ == 0) out_.push_back(0);
      if (value >> b & 1u) out_.back() |= static_cast<std::uint8_t>(0x80u >> used_);
      used_ = (used_ + 1) % 8;
    }
  }

 private:
  std::vector<std::uint8_t>& out_;
  unsigned used_ = 0;
};

class BitReader {
 public:
  explicit BitReader(std::span<const std::uint8_t> in) : in_(in) {}

  std::uint64_t get(unsigned width) {
    std::uint64_t v = 0;
    for (unsigned b = 0; b < width; ++b, ++pos_) v = v << 1 | (in_[pos_ / 8] >> (7 - pos_ % 8) & 1u);
    return v;
  }
  std::uint64_t position() const { return pos_; }

 private:
  std::span<const std::uint8_t> in_;
  std::uint64_t pos_ = 0;
};

std::uint8_t metric_byte(MetricKind kind, MetricScope scope) {
  auto b = static_cast<std::uint8_t>(kind);
  if (scope == MetricScope::Induced && is_path_metric(kind)) b |= kInducedFlag;
  return b;
}

}  // namespace

Quantized quantize(std::span<const double> values, std::uint32_t levels) {
  if (levels < 2) throw RangeError("quantizer needs K >= 2");
  if (levels > 65535) throw RangeError("quantizer supports at most 65535 levels");
  Quantized q;
  q.params.levels = levels;
  if (values.empty()) return q;
  for (double v : values)
    if (!std::isfinite(v)) throw InvariantError("cannot quantize a non-finite value");
  auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  q.params.lo = *lo;
  q.params.hi = *hi;
  q.codes.reserve(values.size());
  const double span = q.params.hi - q.params.lo;
  for (double v : values) {
    if (span == 0.0) {
      q.codes.push_back(0);
      continue;
    }
    double x = std::floor((v - q.params.lo) / span * static_cast<double>(levels - 1) + 0.5);
    x = std::clamp(x, 0.0, static_cast<double>(levels - 1));
    q.codes.push_back(static_cast<std::uint32_t>(x));
  }
  return q;
}

std::vector<double> dequantize(const Quantized& q) {
  std::vector<double> out;
  out.reserve(q.codes.size());
  for (auto c : q.codes) out.push_back(q.params.dequantize(c));
  return out;
}

unsigned bits_for(std::uint64_t x) { return x <= 1 ? 0u : static_cast<unsigned>(std::bit_width(x - 1)); }

std::uint64_t packed_payload_bits(std::uint64_t n, std::uint64_t M, std::uint64_t K) {
  if (M == 0) return 0;
  return (M - 1) * bits_for(n) + M * bits_for(K);
}

std::uint64_t center_value_bits(std::uint64_t n, std::uint64_t M, std::uint64_t K) {
  return M * (bits_for(n) + bits_for(K));
}

double bits_per_node(std::uint64_t n, std::uint64_t M, std::uint64_t K) {
  if (n == 0 || M == 0 || K == 0) throw RangeError("bits_per_node needs n, M, K >= 1");
  // ceil(log2 n + log2 K) == ceil(log2(n K)), evaluated exactly.
  const unsigned joint = bits_for(n * K);
  return static_cast<double>(joint) * static_cast<double>(M) / static_cast<double>(n);
}

std::vector<std::uint8_t> write_stream(const EncodedSignal& s) {
  const auto& h = s.header;
  if (s.centers.size() != h.M || s.codes.size() != h.M) throw InvariantError("stream sizes do not match M");
  if (h.M == 0) throw InvariantError("stream needs at least one center");
  if (s.centers.front() != h.q1) throw InvariantError("first center must equal q1");
  if (h.quantizer.levels < 2 || h.quantizer.levels > 65535) throw RangeError("K must lie in [2, 65535]");
  const unsigned cb = bits_for(h.n);
  const unsigned vb = bits_for(h.quantizer.levels);
  for (auto c : s.centers)
    if (c >= h.n) throw RangeError("center index does not fit the vertex count");
  for (auto c : s.codes)
    if (c >= h.quantizer.levels) throw RangeError("value code exceeds K - 1");

  std::vector<std::uint8_t> out(kMagic.begin(), kMagic.end());
  ByteWriter bw(out);
  bw.put_le<std::uint8_t>(kFormatVersion);
  bw.put_le<std::uint8_t>(static_cast<std::uint8_t>(h.mode));
  bw.put_le<std::uint8_t>(static_cast<std::uint8_t>(h.strategy));
  bw.put_le<std::uint8_t>(metric_byte(h.metric, h.scope));
  bw.put_le<std::uint32_t>(h.n);
  bw.put_le<std::uint32_t>(h.M);
  bw.put_le<std::uint16_t>(static_cast<std::uint16_t>(h.quantizer.levels));
  bw.put_le<double>(h.quantizer.lo);
  bw.put_le<double>(h.quantizer.hi);
  bw.put_le<std::uint32_t>(h.q1);

  BitWriter bits(out);
  for (std::size_t k = 1; k < s.centers.size(); ++k) bits.put(s.centers[k], cb);
  for (auto c : s.codes) bits.put(c, vb);
  return out;
}

EncodedSignal read_stream(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderBytes) throw ParseError("bitstream header is truncated");
  if (!std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) throw ParseError("bad magic: not a BWPC stream");
  ByteReader br(bytes.subspan(4));
  EncodedSignal s;
  auto& h = s.header;
  if (auto v = br.get_le<std::uint8_t>(); v != kFormatVersion)
    throw ParseError("unsupported stream version " + std::to_string(v));
  auto mode = br.get_le<std::uint8_t>();
  if (mode > 1) throw ParseError("bad value mode");
  h.mode = static_cast<ValueMode>(mode);
  auto strategy = br.get_le<std::uint8_t>();
  if (strategy > 2) throw ParseError("bad strategy tag");
  h.strategy = static_cast<StrategyKind>(strategy);
  auto metric = br.get_le<std::uint8_t>();
  h.scope = (metric & kInducedFlag) ? MetricScope::Induced : MetricScope::Global;
  metric &= static_cast<std::uint8_t>(~kInducedFlag);
  if (metric > 4) throw ParseError("bad metric tag");
  h.metric = static_cast<MetricKind>(metric);
  if (h.scope == MetricScope::Induced && !is_path_metric(h.metric)) throw ParseError("induced flag on a coordinate metric");
  h.n = br.get_le<std::uint32_t>();
  h.M = br.get_le<std::uint32_t>();
  h.quantizer.levels = br.get_le<std::uint16_t>();
  h.quantizer.lo = br.get_le<double>();
  h.quantizer.hi = br.get_le<double>();
  h.q1 = br.get_le<std::uint32_t>();
  if (h.n == 0 || h.M == 0 || h.M > h.n) throw ParseError("header requires 1 <= M <= n");
  if (h.quantizer.levels < 2) throw ParseError("header requires K >= 2");
  if (!std::isfinite(h.quantizer.lo) || !std::isfinite(h.quantizer.hi) || h.quantizer.lo > h.quantizer.hi)
    throw ParseError("header has an invalid quantizer range");
  if (h.q1 >= h.n) throw ParseError("q1 is out of range");

  const std::uint64_t payload = packed_payload_bits(h.n, h.M, h.quantizer.levels);
  const std::uint64_t expected = kHeaderBytes + (payload + 7) / 8;
  if (bytes.size() < expected) throw ParseError("bitstream payload is truncated");
  if (bytes.size() > expected) throw ParseError("bitstream has trailing bytes");

  BitReader bits(bytes.subspan(kHeaderBytes));
  const unsigned cb = bits_for(h.n);
  const unsigned vb = bits_for(h.quantizer.levels);
  std::vector<char> used(h.n, 0);
  s.centers.reserve(h.M);
  s.centers.push_back(h.q1);
  used[h.q1] = 1;
  for (std::uint32_t k = 1; k < h.M; ++k) {
    auto c = bits.get(cb);
    if (c >= h.n) throw ParseError("center index out of range");
    if (used[c]) throw ParseError("repeated center " + std::to_string(c));
    used[c] = 1;
    s.centers.push_back(static_cast<Vertex>(c));
  }
  s.codes.reserve(h.M);
  for (std::uint32_t k = 0; k < h.M; ++k) {
    auto c = bits.get(vb);
    if (c >= h.quantizer.levels) throw ParseError("value code exceeds K - 1");
    s.codes.push_back(static_cast<std::uint32_t>(c));
  }
  const std::uint64_t pad = (8 - payload % 8) % 8;
  if (pad > 0 && bits.get(static_cast<unsigned>(pad)) != 0) throw ParseError("nonzero padding bits");
  return s;
}

std::vector<double> stream_values(const BwpTree& tree, const Signal& f, ValueMode mode) {
  auto dec = decompose(tree, f);
  if (mode == ValueMode::Wavelets) {
    std::vector<double> out{dec.root};
    for (const auto& s : dec.splits) out.push_back(s.c_plus);
    return out;
  }
  std::vector<double> means(tree.center_count());
  for (std::size_t i = 0; i < means.size(); ++i) {
    double s = 0.0;
    for (Vertex v : tree.leaf(i)) s += f[v];
    means[i] = s / static_cast<double>(tree.leaf(i).size());
  }
  return means;
}

std::vector<std::uint8_t> serialize(const BwpTree& tree, const Metric& metric, std::span<const double> values,
                                    const StreamOptions& opts) {
  if (values.size() != tree.center_count()) throw InvariantError("value count must equal the number of centers");
  if (metric.graph().size() != tree.vertex_count()) throw InvariantError("metric and tree sizes differ");
  auto q = quantize(values, opts.levels);
  EncodedSignal s;
  s.header.mode = opts.mode;
  s.header.strategy = opts.strategy;
  s.header.metric = metric.kind();
  s.header.scope = is_path_metric(metric.kind()) ? metric.scope() : MetricScope::Global;
  s.header.n = static_cast<std::uint32_t>(tree.vertex_count());
  s.header.M = static_cast<std::uint32_t>(tree.center_count());
  s.header.quantizer = q.params;
  s.header.q1 = tree.centers()[0];
  s.centers.assign(tree.centers().begin(), tree.centers().end());
  s.codes = std::move(q.codes);
  return write_stream(s);
}

DecodedSignal deserialize(std::span<const std::uint8_t> bytes, const Metric& metric) {
  auto stream = read_stream(bytes);
  const auto& h = stream.header;
  if (h.n != metric.graph().size()) throw InvariantError("stream vertex count does not match the graph");
  const auto scope = is_path_metric(metric.kind()) ? metric.scope() : MetricScope::Global;
  if (h.metric != metric.kind() || h.scope != scope) throw InvariantError("stream was encoded with a different metric");
  auto tree = tree_from_centers(metric, stream.centers);
  std::vector<double> values;
  values.reserve(stream.codes.size());
  for (auto c : stream.codes) values.push_back(h.quantizer.dequantize(c));
  return {std::move(tree), std::move(stream), std::move(values)};
}

Signal DecodedSignal::reconstruct(std::optional<std::size_t> mterm) const {
  if (stream.header.mode == ValueMode::Means) {
    if (!mterm) return reconstruct_means(tree, values);
    return reconstruct_wavelets(tree, decompose_leaf_means(tree, values), mterm);
  }
  auto dec = decomposition_from_plus(tree, values.front(), std::span<const double>(values).subspan(1));
  return reconstruct_wavelets(tree, dec, mterm);
}

}  // namespace gw
