#include "gw/besov.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "gw/errors.hpp"
#include "gw/wavelets.hpp"

namespace gw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void collect(std::uint32_t mask, const std::vector<std::uint32_t>& choice, std::vector<MaskSplit>& out) {
  if (std::popcount(mask) < 2) return;
  const std::uint32_t a = choice[mask];
  out.push_back({mask, a, mask & ~a});
  collect(a, choice, out);
  collect(mask & ~a, choice, out);
}

}  // namespace

bool split_is_balanced(std::size_t whole, std::size_t part, double rho) {
  const double w = static_cast<double>(whole);
  const double p = static_cast<double>(part);
  const double tol = 1e-12 * w;
  return (1.0 - rho) * w <= p + tol && p <= rho * w + tol;
}

std::vector<std::uint32_t> MaskTree::sets() const {
  std::vector<std::uint32_t> out{n == 32 ? ~0u : (1u << n) - 1u};
  for (const auto& s : splits) {
    out.push_back(s.first);
    out.push_back(s.second);
  }
  return out;
}

bool MaskTree::complete() const {
  const std::uint32_t full = n == 32 ? ~0u : (1u << n) - 1u;
  if (n == 0 || splits.size() != n - 1) return false;
  if (n > 1 && splits.front().parent != full) return false;
  // Every split partitions its parent; every non-singleton set is split once.
  std::vector<std::uint32_t> split_sets;
  for (const auto& s : splits) {
    if (s.first == 0 || s.second == 0 || (s.first & s.second) != 0 || (s.first | s.second) != s.parent) return false;
    split_sets.push_back(s.parent);
  }
  std::size_t singletons = 0;
  for (auto set : sets()) {
    bool is_split = std::find(split_sets.begin(), split_sets.end(), set) != split_sets.end();
    if (std::popcount(set) == 1) {
      ++singletons;
      if (is_split) return false;
    } else if (!is_split) {
      return false;
    }
  }
  return singletons == n;
}

bool MaskTree::balanced(double rho) const {
  for (const auto& s : splits) {
    auto whole = static_cast<std::size_t>(std::popcount(s.parent));
    if (!split_is_balanced(whole, static_cast<std::size_t>(std::popcount(s.first)), rho) ||
        !split_is_balanced(whole, static_cast<std::size_t>(std::popcount(s.second)), rho))
      return false;
  }
  return true;
}

double BesovResult::ratio() const {
  if (min_r_energy == 0.0) return seminorm == 0.0 ? 1.0 : kInf;
  return seminorm / min_r_energy;
}

BesovResult besov_oracle(const Graph& graph, const Signal& f, double alpha, double r, double rho,
                         std::size_t max_n) {
  const std::size_t n = graph.size();
  if (max_n > 20) throw RangeError("Besov oracle is limited to 20 vertices");
  if (n > max_n) throw RangeError("graph too large for exhaustive tree enumeration");
  if (f.size() != n) throw InvariantError("signal length does not match the graph");
  if (!(rho >= 0.5 && rho < 1.0)) throw RangeError("balance ratio must satisfy 1/2 <= rho < 1");
  check_smoothness_relation(alpha, r);

  const std::uint32_t full = (1u << n) - 1u;
  const std::size_t count = std::size_t{1} << n;
  std::vector<double> osc(count, 0.0), sum(count, 0.0);
  for (std::uint32_t mask = 1; mask < count; ++mask) {
    const int size = std::popcount(mask);
    double total = 0.0;
    for (std::size_t v = 0; v < n; ++v)
      if (mask >> v & 1u) total += f[v];
    sum[mask] = total;
    if (size < 2) continue;
    double sup = 0.0;
    for (std::size_t w = 0; w < n; ++w) {
      if (!(mask >> w & 1u)) continue;
      double s = 0.0;
      for (std::size_t v = 0; v < n; ++v)
        if (mask >> v & 1u) s += std::pow(std::abs(f[v] - f[w]), r);
      sup = std::max(sup, s);
    }
    osc[mask] = std::pow(static_cast<double>(size), -alpha * r) * sup;
  }

  // Minimal subtree cost below each set, over balanced complete subtrees.
  std::vector<double> best_gb(count, kInf), best_nr(count, kInf);
  std::vector<std::uint32_t> choice_gb(count, 0), choice_nr(count, 0);
  auto wavelet_term = [&](std::uint32_t child, std::uint32_t parent) {
    const double size = std::popcount(child);
    const double c = sum[child] / size - sum[parent] / std::popcount(parent);
    return std::pow(std::abs(c) * std::sqrt(size), r);
  };
  for (std::uint32_t mask = 1; mask < count; ++mask) {
    const int size = std::popcount(mask);
    if (size == 1) {
      best_gb[mask] = 0.0;
      best_nr[mask] = 0.0;
      continue;
    }
    const std::uint32_t low = mask & (~mask + 1u);
    const std::uint32_t rest = mask & ~low;
    // Subsets A of mask that contain the lowest vertex, A != mask.
    for (std::uint32_t sub = rest;; sub = (sub - 1) & rest) {
      const std::uint32_t a = sub | low;
      if (a != mask) {
        const std::uint32_t b = mask & ~a;
        const auto pa = static_cast<std::size_t>(std::popcount(a));
        const auto pb = static_cast<std::size_t>(std::popcount(b));
        const auto whole = static_cast<std::size_t>(size);
        if (split_is_balanced(whole, pa, rho) && split_is_balanced(whole, pb, rho)) {
          const double gb = osc[mask] + best_gb[a] + best_gb[b];
          if (std::isfinite(gb) && gb < best_gb[mask]) {
            best_gb[mask] = gb;
            choice_gb[mask] = a;
          }
          const double nr = best_nr[a] + best_nr[b] + wavelet_term(a, mask) + wavelet_term(b, mask);
          if (std::isfinite(nr) && nr < best_nr[mask]) {
            best_nr[mask] = nr;
            choice_nr[mask] = a;
          }
        }
      }
      if (sub == 0) break;
    }
  }

  BesovResult res;
  res.seminorm_tree.n = n;
  res.r_energy_tree.n = n;
  res.feasible = std::isfinite(best_gb[full]);
  if (!res.feasible) {
    res.seminorm = kInf;
    res.min_r_energy = kInf;
    return res;
  }
  res.seminorm = std::pow(best_gb[full], 1.0 / r);
  const double root_term = std::pow(std::abs(sum[full] / static_cast<double>(n)) * std::sqrt(static_cast<double>(n)), r);
  res.min_r_energy = std::pow(root_term + best_nr[full], 1.0 / r);
  collect(full, choice_gb, res.seminorm_tree.splits);
  collect(full, choice_nr, res.r_energy_tree.splits);
  return res;
}

}  // namespace gw
