#include "gw/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <string>
#include <thread>

#include "gw/detail/compensated_sum.hpp"
#include "gw/errors.hpp"

namespace gw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kParallelWork = std::size_t{1} << 20;

struct Best {
  double cost = kInf;
  Vertex id = 0;
  bool valid = false;

  void offer(double c, Vertex v) {
    if (!valid || c < cost || (c == cost && v < id)) {
      cost = c;
      id = v;
      valid = true;
    }
  }
};

/// Data shared by every candidate evaluation for one subset.
struct SplitContext {
  std::span<const Vertex> members;
  std::vector<double> shifted;      // f(v) - mean over the subset
  std::vector<double> anchor_dist;  // d(v, anchor)
};

SplitContext make_context(const Metric& metric, const Signal& f, const Subset& subset, Vertex anchor) {
  SplitContext ctx;
  ctx.members = subset.members();
  detail::CompensatedSum sum;
  for (Vertex v : subset) sum.add(f[v]);
  const double mean = sum.value() / static_cast<double>(subset.size());
  ctx.shifted.reserve(subset.size());
  for (Vertex v : subset) ctx.shifted.push_back(f[v] - mean);
  ctx.anchor_dist = metric.distances_from(anchor, ctx.members);
  return ctx;
}

double half_error(double sum, double sq, double count) {
  return std::max(0.0, sq - sum * sum / count);
}

// Returns +inf if the metric puts every vertex on the anchor side.
double candidate_cost(const Metric& metric, const SplitContext& ctx, Vertex q, std::vector<double>& buf) {
  buf.resize(ctx.members.size());
  metric.distances_from(q, ctx.members, buf);
  double sp = 0.0, s2p = 0.0, sm = 0.0, s2m = 0.0;
  std::size_t np = 0;
  for (std::size_t k = 0; k < ctx.members.size(); ++k) {
    const double g = ctx.shifted[k];
    if (ctx.anchor_dist[k] <= buf[k]) {
      sp += g;
      s2p += g * g;
      ++np;
    } else {
      sm += g;
      s2m += g * g;
    }
  }
  const std::size_t nm = ctx.members.size() - np;
  if (np == 0 || nm == 0) return kInf;
  return half_error(sp, s2p, static_cast<double>(np)) + half_error(sm, s2m, static_cast<double>(nm));
}

Best scan(const Metric& metric, const SplitContext& ctx, std::span<const Vertex> candidates, unsigned workers) {
  auto scan_range = [&](std::size_t lo, std::size_t hi) {
    Best best;
    std::vector<double> buf;
    for (std::size_t k = lo; k < hi; ++k) best.offer(candidate_cost(metric, ctx, candidates[k], buf), candidates[k]);
    return best;
  };
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t work = candidates.size() * ctx.members.size();
  if (workers <= 1 || work < kParallelWork || candidates.size() < 2 * workers)
    return scan_range(0, candidates.size());

  std::vector<Best> partial(workers);
  std::vector<std::thread> pool;
  const std::size_t chunk = (candidates.size() + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    std::size_t lo = std::min(candidates.size(), w * chunk);
    std::size_t hi = std::min(candidates.size(), lo + chunk);
    pool.emplace_back([&, w, lo, hi] { partial[w] = scan_range(lo, hi); });
  }
  for (auto& t : pool) t.join();
  // Lexicographic (cost, id) reduction: independent of the schedule.
  Best best;
  for (const auto& b : partial)
    if (b.valid) best.offer(b.cost, b.id);
  return best;
}

void check_signal(const Metric& metric, const Signal& f) {
  if (f.size() != metric.graph().size()) throw InvariantError("signal length does not match the graph");
  for (double v : f)
    if (!std::isfinite(v)) throw InvariantError("signal contains a non-finite value");
}

}  // namespace

StrategyKind parse_strategy_kind(std::string_view name) {
  if (name == "md") return StrategyKind::MaxDistance;
  if (name == "fa") return StrategyKind::FullyAdaptive;
  if (name == "r") return StrategyKind::Randomized;
  throw RangeError("unknown strategy '" + std::string(name) + "'");
}

std::string_view strategy_name(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::MaxDistance: return "md";
    case StrategyKind::FullyAdaptive: return "fa";
    case StrategyKind::Randomized: return "r";
  }
  return "?";
}

double split_cost(const Metric& metric, const Signal& f, const Subset& subset, Vertex anchor, Vertex q) {
  if (anchor == q) throw InvariantError("split cost needs a center distinct from the anchor");
  if (!subset.contains(anchor) || !subset.contains(q)) throw InvariantError("center is not in the subset");
  auto ctx = make_context(metric, f, subset, anchor);
  std::vector<double> buf;
  double c = candidate_cost(metric, ctx, q, buf);
  if (!std::isfinite(c)) throw InvariantError("metric does not separate the wedge anchors");
  return c;
}

Encoder::Encoder(const Metric& metric, const Signal& f, Vertex q1, Strategy strategy)
    : metric_(&metric), f_(&f), strategy_(strategy), tree_(metric.graph().size(), q1), rng_(strategy.seed) {
  check_signal(metric, f);
  if (strategy.kind == StrategyKind::Randomized && strategy.sample_size < 1)
    throw RangeError("randomized strategy needs R >= 1");
  means_.resize(1);
  errors_.resize(1);
  refresh(0);
  total_error_.add(errors_[0]);
}

void Encoder::refresh(std::size_t i) {
  const auto& leaf = tree_.leaf(i);
  const Signal& f = *f_;
  auto [lo, hi] = std::minmax_element(leaf.begin(), leaf.end(), [&](Vertex a, Vertex b) { return f[a] < f[b]; });
  if (f[*lo] == f[*hi]) {
    means_[i] = f[*lo];
    errors_[i] = 0.0;
    return;
  }
  detail::CompensatedSum sum;
  for (Vertex v : leaf) sum.add(f[v]);
  const double mean = sum.value() / static_cast<double>(leaf.size());
  detail::CompensatedSum sq;
  for (Vertex v : leaf) {
    double d = f[v] - mean;
    sq.add(d * d);
  }
  means_[i] = mean;
  errors_[i] = sq.value();
}

bool Encoder::can_split() const noexcept {
  for (const auto& leaf : tree_.leaves())
    if (leaf.size() >= 2) return true;
  return false;
}

std::size_t Encoder::select_subset() const {
  auto leaves = tree_.leaves();
  std::size_t best = leaves.size();
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    if (leaves[i].size() < 2) continue;
    if (best == leaves.size() || errors_[i] > errors_[best]) best = i;
  }
  if (best == leaves.size()) throw InvariantError("every subset is a singleton; encoding is complete");
  if (errors_[best] > 0.0) return best;
  for (std::size_t i = 0; i < leaves.size(); ++i)
    if (leaves[i].size() > leaves[best].size()) best = i;
  return best;
}

double Encoder::split_cost(std::size_t j, Vertex q) const {
  return gw::split_cost(*metric_, *f_, tree_.leaf(j), tree_.centers()[j], q);
}

Vertex Encoder::farthest(std::size_t j) {
  const auto& leaf = tree_.leaf(j);
  const Vertex anchor = tree_.centers()[j];
  auto dist = metric_->distances_from(anchor, leaf.members());
  stats_.vertex_visits += leaf.size();
  std::size_t best = leaf.size();
  for (std::size_t k = 0; k < leaf.size(); ++k) {
    if (leaf[k] == anchor) continue;
    if (best == leaf.size() || dist[k] > dist[best]) best = k;
  }
  return leaf[best];
}

Vertex Encoder::best_candidate(std::size_t j, std::span<const Vertex> candidates) {
  const auto& leaf = tree_.leaf(j);
  auto ctx = make_context(*metric_, *f_, leaf, tree_.centers()[j]);
  stats_.candidates += candidates.size();
  stats_.vertex_visits += candidates.size() * leaf.size();
  Best best = scan(*metric_, ctx, candidates, strategy_.workers);
  if (!best.valid || !std::isfinite(best.cost))
    throw InvariantError("metric does not separate any candidate from the subset center");
  return best.id;
}

Vertex Encoder::propose_center(std::size_t j) {
  const auto& leaf = tree_.leaf(j);
  if (leaf.size() < 2) throw InvariantError("cannot propose a center for a singleton subset");
  if (strategy_.kind == StrategyKind::MaxDistance) return farthest(j);

  const Vertex anchor = tree_.centers()[j];
  std::vector<Vertex> others;
  others.reserve(leaf.size() - 1);
  for (Vertex v : leaf)
    if (v != anchor) others.push_back(v);
  if (strategy_.kind == StrategyKind::FullyAdaptive || strategy_.sample_size >= others.size())
    return best_candidate(j, others);

  // Uniform sample without replacement; std::sample keeps the input order.
  std::vector<Vertex> sample;
  sample.reserve(strategy_.sample_size);
  std::sample(others.begin(), others.end(), std::back_inserter(sample), strategy_.sample_size, rng_);
  return best_candidate(j, sample);
}

void Encoder::refine(std::size_t j, Vertex q) {
  const double old_error = errors_.at(j);
  tree_.refine(*metric_, j, q);
  means_.push_back(0.0);
  errors_.push_back(0.0);
  refresh(j);
  refresh(tree_.center_count() - 1);
  total_error_.add(-old_error);
  total_error_.add(errors_[j]);
  total_error_.add(errors_.back());
}

void Encoder::step() {
  auto j = select_subset();
  refine(j, propose_center(j));
}

EncodeResult encode(const Metric& metric, const Signal& f, Vertex q1, std::size_t M, Strategy strategy) {
  const std::size_t n = metric.graph().size();
  if (M < 1 || M > n) throw RangeError("M must satisfy 1 <= M <= n");
  if (q1 >= n) throw RangeError("q1 is not a vertex");
  Encoder enc(metric, f, q1, strategy);
  std::vector<double> trace;
  trace.reserve(M);
  trace.push_back(std::sqrt(enc.total_error()));
  // With M <= n a splittable subset exists at every step.
  for (std::size_t m = 2; m <= M; ++m) {
    enc.step();
    trace.push_back(std::sqrt(enc.total_error()));
  }
  return {enc.tree(), {enc.leaf_means().begin(), enc.leaf_means().end()}, std::move(trace), enc.stats()};
}

ErrorCurve error_curve(const Metric& metric, const Signal& f, Vertex q1, std::span<const Strategy> strategies,
                       std::size_t max_m) {
  ErrorCurve curve;
  curve.strategies.assign(strategies.begin(), strategies.end());
  for (const auto& s : strategies) curve.errors.push_back(encode(metric, f, q1, max_m, s).error_trace);
  return curve;
}

}  // namespace gw
