#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "gw/bwp_tree.hpp"
#include "gw/detail/compensated_sum.hpp"
#include "gw/metric.hpp"

namespace gw {

enum class StrategyKind : std::uint8_t { MaxDistance = 0, FullyAdaptive = 1, Randomized = 2 };

struct Strategy {
  StrategyKind kind = StrategyKind::FullyAdaptive;
  std::size_t sample_size = 50;  // R, randomized only
  std::uint64_t seed = 0;        // randomized only
  unsigned workers = 0;          // candidate-scan threads, 0 = hardware concurrency

  static Strategy md() { return {StrategyKind::MaxDistance}; }
  static Strategy fa() { return {StrategyKind::FullyAdaptive}; }
  static Strategy randomized(std::size_t r, std::uint64_t seed) {
    return {StrategyKind::Randomized, r, seed};
  }
};

StrategyKind parse_strategy_kind(std::string_view name);
std::string_view strategy_name(StrategyKind kind);

/// Operation counters for the cost bounds (O(Mn) MD, O(MRn) R, O(Mn^2) FA).
struct EncoderStats {
  std::uint64_t candidates = 0;     // candidate centers whose split cost was evaluated
  std::uint64_t vertex_visits = 0;  // (candidate, vertex) distance comparisons
};

/// Sum of squared deviations from the mean on each side of the wedge split
/// of `subset` by (anchor, q). Evaluated with the one-pass identity
/// sum (f - mean)^2 = sum f^2 - |W| mean^2 on values shifted by the subset mean.
double split_cost(const Metric& metric, const Signal& f, const Subset& subset, Vertex anchor, Vertex q);

/// Greedy BWP tree growth state (one encoding job, single writer).
class Encoder {
 public:
  Encoder(const Metric& metric, const Signal& f, Vertex q1, Strategy strategy);

  const BwpTree& tree() const noexcept { return tree_; }
  std::span<const double> leaf_means() const noexcept { return means_; }
  std::span<const double> leaf_errors() const noexcept { return errors_; }
  /// Running sum of leaf errors, updated as total - e_W + cost at each split.
  double total_error() const noexcept { return std::max(0.0, total_error_.value()); }
  const EncoderStats& stats() const noexcept { return stats_; }

  bool can_split() const noexcept;

  /// Subset with the largest squared L2 error among non-singletons; ties go
  /// to the smallest center index. When every candidate has zero error the
  /// largest splittable subset is chosen instead.
  std::size_t select_subset() const;

  double split_cost(std::size_t j, Vertex q) const;

  /// New center for subset j according to the strategy. Ties -> smallest id.
  Vertex propose_center(std::size_t j);

  /// Splits subset j by (q_j, q) and refreshes the cached means and errors.
  void refine(std::size_t j, Vertex q);

  /// select_subset + propose_center + refine.
  void step();

 private:
  void refresh(std::size_t i);
  Vertex farthest(std::size_t j);
  Vertex best_candidate(std::size_t j, std::span<const Vertex> candidates);

  const Metric* metric_;
  const Signal* f_;
  Strategy strategy_;
  BwpTree tree_;
  std::vector<double> means_;
  std::vector<double> errors_;
  detail::CompensatedSum total_error_;  // running sum of leaf errors
  EncoderStats stats_;
  std::mt19937_64 rng_;
};

struct EncodeResult {
  BwpTree tree;
  std::vector<double> leaf_means;
  /// error_trace[m-1] = ||f - W_m f||_2 for m = 1..M.
  std::vector<double> error_trace;
  EncoderStats stats;
};

/// Greedy wedgelet encoding with M centers (1 <= M <= n).
EncodeResult encode(const Metric& metric, const Signal& f, Vertex q1, std::size_t M, Strategy strategy);

/// ||f - W_m f||_2 for m = 1..max_m, one column per strategy.
struct ErrorCurve {
  std::vector<Strategy> strategies;
  std::vector<std::vector<double>> errors;  // errors[s][m-1]
};

ErrorCurve error_curve(const Metric& metric, const Signal& f, Vertex q1, std::span<const Strategy> strategies,
                       std::size_t max_m);

}  // namespace gw
