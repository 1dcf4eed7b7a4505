#include <doctest.h>

#include <bit>
#include <functional>
#include <random>

#include "gw/besov.hpp"
#include "gw/errors.hpp"
#include "oracles.hpp"

using namespace gw;

namespace {

using Sets = std::vector<std::vector<Vertex>>;

/// Every complete binary partitioning tree of `set` whose splits satisfy the
/// balance bound, as the list of all its non-root sets.
std::vector<Sets> all_trees(const std::vector<Vertex>& set, double rho) {
  if (set.size() == 1) return {Sets{}};
  std::vector<Sets> out;
  const std::size_t k = set.size();
  // Subsets containing set[0], excluding the full set.
  for (std::uint32_t bits = 0; bits < (1u << (k - 1)); ++bits) {
    std::vector<Vertex> a{set[0]}, b;
    for (std::size_t i = 1; i < k; ++i) ((bits >> (i - 1)) & 1u ? a : b).push_back(set[i]);
    if (b.empty()) continue;
    auto ok = [&](std::size_t part) {
      return (1.0 - rho) * double(k) <= double(part) + 1e-9 && double(part) <= rho * double(k) + 1e-9;
    };
    if (!ok(a.size()) || !ok(b.size())) continue;
    for (const auto& ta : all_trees(a, rho))
      for (const auto& tb : all_trees(b, rho)) {
        Sets t{a, b};
        t.insert(t.end(), ta.begin(), ta.end());
        t.insert(t.end(), tb.begin(), tb.end());
        out.push_back(t);
      }
  }
  return out;
}

double oscillation_sum(const Signal& f, const std::vector<Vertex>& all, const Sets& sets, double alpha, double r) {
  auto term = [&](const std::vector<Vertex>& W) {
    double sup = 0.0;
    for (Vertex w : W) {
      double s = 0.0;
      for (Vertex v : W) s += std::pow(std::abs(f[v] - f[w]), r);
      sup = std::max(sup, s);
    }
    return std::pow(double(W.size()), -alpha * r) * sup;
  };
  double total = term(all);
  for (const auto& W : sets) total += term(W);
  return std::pow(total, 1.0 / r);
}

/// N_r of a tree given as (parent, child) pairs derived from the set list.
double tree_r_energy(const Signal& f, const std::vector<Vertex>& all, const Sets& sets, double r) {
  double total = std::pow(std::abs(oracle::mean(f, all)) * std::sqrt(double(all.size())), r);
  for (const auto& W : sets) {
    // Parent: the smallest listed set (or the root) strictly containing W.
    const std::vector<Vertex>* parent = &all;
    for (const auto& P : sets)
      if (P.size() > W.size() && P.size() < parent->size() && std::includes(P.begin(), P.end(), W.begin(), W.end()))
        parent = &P;
    double c = oracle::mean(f, W) - oracle::mean(f, *parent);
    total += std::pow(std::abs(c) * std::sqrt(double(W.size())), r);
  }
  return std::pow(total, 1.0 / r);
}

std::vector<Vertex> mask_members(std::uint32_t mask) {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < 32; ++v)
    if (mask >> v & 1u) out.push_back(v);
  return out;
}

Graph path_graph(std::size_t n) {
  std::vector<Edge> e;
  for (Vertex v = 0; v + 1 < n; ++v) e.push_back({v, v + 1});
  return Graph(n, e);
}

}  // namespace

TEST_CASE("two vertices: closed-form values") {
  Graph g = path_graph(2);
  for (double r : {0.5, 2.0 / 3.0, 1.0}) {
    const double alpha = 1.0 / r - 0.5;
    auto res = besov_oracle(g, Signal{0.0, 1.0}, alpha, r, 0.5);
    REQUIRE(res.feasible);
    // Only the root oscillates: sup_w sum_v |f(v) - f(w)|^r = 1.
    CHECK(res.seminorm == doctest::Approx(std::pow(2.0, -alpha)));
    const double nr = std::pow(std::pow(std::sqrt(2.0) / 2.0, r) + 2.0 * std::pow(0.5, r), 1.0 / r);
    CHECK(res.min_r_energy == doctest::Approx(nr));
    CHECK(res.seminorm_tree.complete());
  }
}

TEST_CASE("exhaustive minimum matches enumerate-then-evaluate") {
  std::mt19937_64 rng(1);
  for (std::size_t n = 1; n <= 6; ++n) {
    Graph g = path_graph(n);
    std::vector<Vertex> all(n);
    std::iota(all.begin(), all.end(), Vertex{0});
    for (double rho : {0.5, 2.0 / 3.0, 0.75, 0.9}) {
      auto trees = all_trees(all, rho);
      for (double r : {2.0 / 3.0, 1.0}) {
        const double alpha = 1.0 / r - 0.5;
        for (int rep = 0; rep < 3; ++rep) {
          Signal f = oracle::random_signal(n, rng);
          auto res = besov_oracle(g, f, alpha, r, rho);
          if (trees.empty()) {
            CHECK_FALSE(res.feasible);
            CHECK(std::isinf(res.seminorm));
            continue;
          }
          double best_gb = oracle::kInf, best_nr = oracle::kInf;
          for (const auto& t : trees) {
            best_gb = std::min(best_gb, oscillation_sum(f, all, t, alpha, r));
            best_nr = std::min(best_nr, tree_r_energy(f, all, t, r));
          }
          REQUIRE(res.feasible);
          CHECK(res.seminorm == doctest::Approx(best_gb).epsilon(1e-10));
          CHECK(res.min_r_energy == doctest::Approx(best_nr).epsilon(1e-10));
          CHECK(res.seminorm_tree.complete());
          CHECK(res.seminorm_tree.balanced(rho));
          CHECK(res.r_energy_tree.complete());
          CHECK(res.r_energy_tree.balanced(rho));
          Sets listed;
          for (auto m : res.seminorm_tree.sets())
            if (m != (1u << n) - 1u) listed.push_back(mask_members(m));
          CHECK(oscillation_sum(f, all, listed, alpha, r) == doctest::Approx(res.seminorm).epsilon(1e-10));
        }
      }
    }
  }
}

TEST_CASE("constant signals have zero seminorm") {
  Graph g = gen_er_graph(7, 0.5, 3);
  auto res = besov_oracle(g, Signal(7, 2.5), 1.0, 2.0 / 3.0, 2.0 / 3.0);
  CHECK(res.feasible);
  CHECK(res.seminorm == 0.0);
}

TEST_CASE("balance test and argument validation") {
  CHECK(split_is_balanced(3, 1, 2.0 / 3.0));
  CHECK(split_is_balanced(3, 2, 2.0 / 3.0));
  CHECK_FALSE(split_is_balanced(3, 1, 0.6));
  CHECK(split_is_balanced(4, 2, 0.5));
  CHECK_FALSE(split_is_balanced(4, 1, 0.5));
  Graph g = path_graph(4);
  Signal f(4, 0.0);
  CHECK_THROWS_AS(besov_oracle(g, f, 1.0, 2.0 / 3.0, 0.4), RangeError);
  CHECK_THROWS_AS(besov_oracle(g, f, 1.0, 2.0 / 3.0, 1.0), RangeError);
  CHECK_THROWS_AS(besov_oracle(g, f, 1.0, 1.0, 0.75), RangeError);
  CHECK_THROWS_AS(besov_oracle(g, f, 1.0, 2.0 / 3.0, 0.75, 3), RangeError);
  CHECK_THROWS_AS(besov_oracle(g, f, 1.0, 2.0 / 3.0, 0.75, 21), RangeError);
  CHECK_THROWS_AS(besov_oracle(g, Signal(3, 0.0), 1.0, 2.0 / 3.0, 0.75), InvariantError);
}
