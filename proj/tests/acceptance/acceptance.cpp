// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "gw/besov.hpp"
#include "gw/codec.hpp"
#include "gw/encoder.hpp"
#include "gw/imaging.hpp"
#include "gw/synth.hpp"
#include "gw/wavelets.hpp"
#include "oracles.hpp"

using namespace gw;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Recorder {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (!ok && outcome_.pass) {
      outcome_.pass = false;
      outcome_.detail = what;
    }
  }
  void note(const std::string& s) {
    if (outcome_.pass) outcome_.detail = s;
  }
  Outcome result() const {
    Outcome o = outcome_;
    if (o.pass && o.detail.empty()) o.detail = std::to_string(checks_) + " checks";
    return o;
  }

 private:
  Outcome outcome_;
  std::size_t checks_ = 0;
};

std::string fmt(double x, int prec = 4) {
  std::ostringstream os;
  os.precision(prec);
  os << x;
  return os.str();
}

const Strategy kStrategies[] = {Strategy::md(), Strategy::fa(), Strategy::randomized(5, 11)};

// 1. M = n reproduces the signal.
Outcome exact_reconstruction() {
  Recorder rec;
  std::mt19937_64 rng(101);
  Graph grid = gen_grid_graph(16, 16);
  for (int k = 0; k < 50; ++k) {
    Graph er = gen_er_graph(50, 0.1, 1000 + k);
    for (const Graph* g : {&er, &grid}) {
      Metric metric(*g, MetricKind::Hop);
      Signal f = oracle::random_signal(g->size(), rng, -100.0, 100.0);
      auto res = encode(metric, f, static_cast<Vertex>(rng() % g->size()), g->size(), kStrategies[k % 3]);
      const double tol = 1e-10 * (1.0 + oracle::norm_inf(f));
      auto means = reconstruct_means(res.tree, res.leaf_means);
      auto waves = reconstruct_wavelets(res.tree, decompose(res.tree, f));
      for (std::size_t v = 0; v < f.size(); ++v) {
        rec.expect(std::abs(means[v] - f[v]) <= tol, "means reconstruction differs at signal " + std::to_string(k));
        rec.expect(std::abs(waves[v] - f[v]) <= tol, "wavelet reconstruction differs at signal " + std::to_string(k));
      }
    }
  }
  return rec.result();
}

// 2. Node count laws.
Outcome tree_size_law() {
  Recorder rec;
  std::mt19937_64 rng(102);
  for (int k = 0; k < 40; ++k) {
    Graph g = k % 2 ? gen_er_graph(30 + k, 0.15, 2000 + k) : gen_grid_graph(5 + k % 7, 4 + k % 5);
    const auto kind = g.has_coords() ? MetricKind::CoordL2 : MetricKind::Hop;
    Metric metric(g, kind, k % 4 == 1 ? MetricScope::Induced : MetricScope::Global);
    BwpTree complete = tree_from_centers(metric, oracle::random_centers(g.size(), g.size(), rng));
    rec.expect(complete.complete() && complete.node_count() == 2 * g.size() - 1, "complete tree node count");
    for (std::size_t M = 1; M <= g.size(); M += 1 + g.size() / 10) {
      BwpTree t = tree_from_centers(metric, oracle::random_centers(g.size(), M, rng));
      rec.expect(t.node_count() == 2 * M - 1, "BWP tree node count for M=" + std::to_string(M));
    }
    Signal f = oracle::random_signal(g.size(), rng);
    auto res = encode(metric, f, 0, g.size(), kStrategies[k % 3]);
    rec.expect(res.tree.node_count() == 2 * g.size() - 1, "encoded complete tree node count");
  }
  return rec.result();
}

// 3. Coefficient balance and agreement of the two reconstructions.
Outcome wavelet_identities() {
  Recorder rec;
  std::mt19937_64 rng(103);
  for (int k = 0; k < 100; ++k) {
    Graph g = gen_er_graph(40, 0.1, 3000 + k);
    Metric metric(g, MetricKind::Hop);
    Signal f = oracle::random_signal(g.size(), rng, -50.0, 50.0);
    BwpTree tree = tree_from_centers(metric, oracle::random_centers(g.size(), 1 + rng() % g.size(), rng));
    auto dec = decompose(tree, f);
    const double scale = 1.0 + oracle::norm_inf(f);
    for (const auto& s : dec.splits) {
      const double total = double(s.plus_size + s.minus_size);
      const double lhs = s.c_plus * double(s.plus_size) + s.c_minus * double(s.minus_size);
      rec.expect(std::abs(lhs) <= 1e-10 * total * scale, "c+|W+| + c-|W-| != 0");
    }
    std::vector<double> means;
    for (const auto& leaf : tree.leaves()) means.push_back(oracle::mean(f, {leaf.begin(), leaf.end()}));
    std::vector<double> c_plus;
    for (const auto& s : dec.splits) c_plus.push_back(s.c_plus);
    auto a = reconstruct_means(tree, means);
    auto b = reconstruct_wavelets(tree, decomposition_from_plus(tree, dec.root, c_plus));
    for (std::size_t v = 0; v < a.size(); ++v)
      rec.expect(std::abs(a[v] - b[v]) <= 1e-10 * scale, "means and wavelet reconstructions differ");
  }
  return rec.result();
}

struct TheoryCase {
  Graph graph;
  Signal f;
  BwpTree tree;
};

std::vector<TheoryCase> theory_cases() {
  std::vector<TheoryCase> out;
  std::mt19937_64 rng(104);
  for (int k = 0; k < 20; ++k) {
    Graph g = gen_er_graph(24, 0.2, 4000 + k);
    Signal f = oracle::random_signal(g.size(), rng);
    Metric metric(g, MetricKind::Hop);
    auto res = encode(metric, f, static_cast<Vertex>(rng() % g.size()), g.size(), Strategy::fa());
    out.push_back({g, f, res.tree});
  }
  return out;
}

// 4. Jackson estimate with its explicit constant, and the norm bound.
Outcome jackson(const std::vector<TheoryCase>& cases) {
  Recorder rec;
  double worst = 0.0;
  for (double r : {2.0 / 3.0, 1.0}) {
    for (std::size_t k = 0; k < cases.size(); ++k) {
      auto rep = jackson_check(cases[k].tree, cases[k].f, r);
      rec.expect(!rep.rows.empty(), "no dyadic rows");
      for (const auto& row : rep.rows) {
        worst = std::max(worst, row.error / row.bound);
        rec.expect(row.holds, "case " + std::to_string(k) + " r=" + fmt(r) + " m=" + std::to_string(row.m) +
                                  ": error " + fmt(row.error) + " > bound " + fmt(row.bound));
      }
      rec.expect(rep.norm_bound_holds, "norm bound fails in case " + std::to_string(k));
    }
  }
  rec.note("max error/bound ratio " + fmt(worst));
  return rec.result();
}

// 5. Upper estimate of the oscillation functional by the r-energy.
Outcome mr_bound(const std::vector<TheoryCase>& cases) {
  Recorder rec;
  double worst = 0.0;
  for (double r : {2.0 / 3.0, 1.0}) {
    for (std::size_t k = 0; k < cases.size(); ++k) {
      auto rep = jackson_check(cases[k].tree, cases[k].f, r);
      rec.expect(rep.m_r.has_value(), "M_r missing");
      if (!rep.m_r) continue;
      worst = std::max(worst, *rep.m_r / *rep.m_r_bound);
      rec.expect(rep.m_r_holds, "case " + std::to_string(k) + " r=" + fmt(r) + ": M_r " + fmt(*rep.m_r) +
                                    " > bound " + fmt(*rep.m_r_bound) + " (rho " + fmt(rep.rho) + ")");
    }
  }
  rec.note("max M_r/bound ratio " + fmt(worst));
  return rec.result();
}

// 6. Every fully adaptive split minimizes the split cost; R >= |W|-1 equals FA.
Outcome fa_optimality() {
  Recorder rec;
  std::mt19937_64 rng(106);
  std::size_t splits = 0;
  for (int k = 0; k < 6; ++k) {
    Graph g = k % 2 ? gen_er_graph(120, 0.04, 6000 + k) : gen_grid_graph(12, 10);
    const MetricKind kind = k % 2 ? MetricKind::Hop : (k == 2 ? MetricKind::CoordL1 : MetricKind::CoordL2);
    auto paths = oracle::floyd_warshall(g, false);
    auto d = [&](Vertex a, Vertex b) { return oracle::dist(g, kind, paths, a, b); };
    Metric metric(g, kind);
    Signal f = k == 0 ? halfplane_indicator(g, 5.5) : oracle::random_signal(g.size(), rng);
    Encoder enc(metric, f, static_cast<Vertex>(rng() % g.size()), Strategy::fa());
    while (enc.can_split()) {
      auto j = enc.select_subset();
      const auto& leaf = enc.tree().leaf(j);
      std::vector<Vertex> members(leaf.begin(), leaf.end());
      const Vertex anchor = enc.tree().centers()[j];
      Vertex q = enc.propose_center(j);
      double best = oracle::kInf;
      for (Vertex v : members)
        if (v != anchor) best = std::min(best, oracle::split_cost(f, members, anchor, v, d));
      double chosen = oracle::split_cost(f, members, anchor, q, d);
      rec.expect(chosen <= best + 1e-9 * (1.0 + best), "FA split not minimal at split " + std::to_string(splits));
      enc.refine(j, q);
      ++splits;
    }
    auto fa = encode(metric, f, 0, g.size(), Strategy::fa());
    auto r = encode(metric, f, 0, g.size(), Strategy::randomized(g.size() - 1, 77));
    rec.expect(fa.tree == r.tree, "R with full sample differs from FA");
  }
  rec.note(std::to_string(splits) + " splits verified exhaustively");
  return rec.result();
}

/// Canonical form of a graph on n <= 6 vertices: smallest adjacency bit
/// pattern over all vertex relabelings.
std::uint32_t canonical(std::size_t n, const std::vector<std::pair<int, int>>& pairs, std::uint32_t edges) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::uint32_t best = ~0u;
  do {
    std::uint32_t code = 0;
    for (std::size_t e = 0; e < pairs.size(); ++e) {
      if (!(edges >> e & 1u)) continue;
      int a = perm[pairs[e].first], b = perm[pairs[e].second];
      if (a > b) std::swap(a, b);
      for (std::size_t t = 0; t < pairs.size(); ++t)
        if (pairs[t].first == a && pairs[t].second == b) code |= 1u << t;
    }
    best = std::min(best, code);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// 7. Exhaustive Besov-type measure on all small connected graphs.
Outcome besov_sanity() {
  Recorder rec;
  std::mt19937_64 rng(107);
  const double rho = 2.0 / 3.0;
  std::size_t graphs = 0;
  for (std::size_t n = 1; n <= 6; ++n) {
    std::vector<std::pair<int, int>> pairs;
    for (int a = 0; a < int(n); ++a)
      for (int b = a + 1; b < int(n); ++b) pairs.emplace_back(a, b);
    std::set<std::uint32_t> seen;
    for (std::uint32_t mask = 0; mask < (1u << pairs.size()); ++mask) {
      std::vector<Edge> edges;
      for (std::size_t e = 0; e < pairs.size(); ++e)
        if (mask >> e & 1u) edges.push_back({Vertex(pairs[e].first), Vertex(pairs[e].second)});
      if (!is_connected(n, edges)) continue;
      if (!seen.insert(canonical(n, pairs, mask)).second) continue;
      Graph g(n, edges);
      ++graphs;
      for (double r : {2.0 / 3.0, 1.0}) {
        const double alpha = 1.0 / r - 0.5;
        for (int s = 0; s < 10; ++s) {
          Signal f = oracle::random_signal(n, rng);
          auto res = besov_oracle(g, f, alpha, r, rho);
          rec.expect(res.feasible && std::isfinite(res.seminorm), "seminorm not finite");
          rec.expect(res.seminorm_tree.complete(), "minimizing tree not complete");
          rec.expect(res.seminorm_tree.balanced(rho), "minimizing tree not balanced");
          rec.expect(res.r_energy_tree.complete() && res.r_energy_tree.balanced(rho), "N_r tree invalid");
        }
        auto flat = besov_oracle(g, Signal(n, 3.25), alpha, r, rho);
        rec.expect(flat.seminorm == 0.0, "constant signal has nonzero seminorm");
      }
    }
  }
  rec.expect(graphs == 1 + 1 + 2 + 6 + 21 + 112, "unexpected number of connected graphs: " + std::to_string(graphs));
  rec.note(std::to_string(graphs) + " connected graphs up to isomorphism");
  return rec.result();
}

// 8. Bit accounting and bit-identical round trips.
Outcome memory_accounting() {
  Recorder rec;
  const double bpn = bits_per_node(1u << 18, 1000, 256);
  rec.expect(std::abs(bpn - 26000.0 / 262144.0) < 1e-15 && bpn < 0.1, "bits per node " + fmt(bpn));
  std::mt19937_64 rng(108);
  for (int k = 0; k < 100; ++k) {
    const bool pow2 = k % 4 == 0;
    const std::size_t er_n = 20 + rng() % 120;
    Graph g = pow2 ? gen_grid_graph(8, 8)
                   : gen_er_graph(er_n, 2.5 * std::log(double(er_n)) / double(er_n), 8000 + k);
    Metric metric(g, pow2 ? MetricKind::CoordLinf : MetricKind::Hop, k % 3 == 1 ? MetricScope::Induced : MetricScope::Global);
    Signal f = oracle::random_signal(g.size(), rng, 0.0, 255.0);
    const std::size_t M = 1 + rng() % g.size();
    const std::uint32_t K = pow2 ? 1u << (1 + rng() % 12) : 2 + rng() % 1000;
    auto res = encode(metric, f, static_cast<Vertex>(rng() % g.size()), M, kStrategies[k % 3]);
    const auto mode = k % 2 ? ValueMode::Wavelets : ValueMode::Means;
    auto bytes = serialize(res.tree, metric, stream_values(res.tree, f, mode), {mode, kStrategies[k % 3].kind, K});
    unsigned bn = 0, bk = 0;
    while ((std::size_t{1} << bn) < g.size()) ++bn;
    while ((std::size_t{1} << bk) < K) ++bk;
    const std::uint64_t layout = (M - 1) * bn + M * bk;
    rec.expect(packed_payload_bits(g.size(), M, K) == layout, "payload formula");
    rec.expect(bytes.size() == kHeaderBytes + (layout + 7) / 8, "serialized size does not match the layout");
    if (pow2) {
      const double joint = std::ceil(std::log2(double(g.size())) + std::log2(double(K)));
      rec.expect(double(layout) <= joint * double(M), "layout exceeds ceil(log2 n + log2 K) M");
    }
    auto stream = read_stream(bytes);
    rec.expect(write_stream(stream) == bytes, "stream is not bit-identical after a round trip");
    auto dec = deserialize(bytes, metric);
    rec.expect(dec.tree == res.tree, "decoded tree differs");
  }
  rec.note("bits_per_node(2^18, 1000, 256) = " + fmt(bpn, 6));
  return rec.result();
}

// 9. Recovery of a half-plane indicator on a grid.
Outcome indicator_recovery() {
  Recorder rec;
  Graph g = gen_grid_graph(30, 30);
  Signal f(g.size());
  for (Vertex v = 0; v < g.size(); ++v) {
    const auto p = g.coord(v);
    f[v] = p[1] < 0.6 * p[0] + 6.0 ? 1.0 : -1.0;
  }
  Metric metric(g, MetricKind::Hop);
  std::mt19937_64 rng(109);
  std::size_t worst_final = 0, non_increasing = 0, steps = 0;
  for (int trial = 0; trial < 5; ++trial) {
    Encoder enc(metric, f, static_cast<Vertex>(rng() % g.size()), Strategy::fa());
    auto miscount = [&] {
      auto approx = reconstruct_means(enc.tree(), enc.leaf_means());
      std::size_t bad = 0;
      for (Vertex v = 0; v < g.size(); ++v) bad += (approx[v] > 0.0 ? 1.0 : -1.0) != f[v] ? 1 : 0;
      return bad;
    };
    std::size_t prev = miscount(), best = prev;
    for (int s = 0; s < 40 && enc.can_split(); ++s) {
      enc.step();
      std::size_t now = miscount();
      ++steps;
      non_increasing += now <= prev ? 1 : 0;
      prev = now;
      best = std::min(best, now);
    }
    worst_final = std::max(worst_final, best);
    rec.expect(best * 100 <= g.size(), "trial " + std::to_string(trial) + ": " + std::to_string(best) +
                                            " misclassified after 40 splits");
  }
  const double frac = double(non_increasing) / double(steps);
  rec.expect(frac >= 0.9, "misclassification non-increasing on only " + fmt(100 * frac) + "% of steps");
  rec.note("worst misclassified " + std::to_string(worst_final) + "/900, non-increasing on " + fmt(100 * frac) +
           "% of steps");
  return rec.result();
}

// 10. Wedgelets against quadtree and 2D Haar at equal budgets.
Outcome baseline_ordering() {
  Recorder rec;
  const std::size_t budget = 50;
  double min_gap_q = oracle::kInf, min_gap_h = oracle::kInf;
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    GrayImage img = diagonal_wedge_image(64, 64, seed);
    auto ig = image_to_signal(img);
    Metric metric(ig.graph, MetricKind::CoordL2);
    auto res = encode(metric, ig.signal, 0, budget, Strategy::fa());
    GrayImage wedge = signal_to_image(reconstruct_means(res.tree, res.leaf_means), 64, 64);
    const double pw = psnr(img, wedge);
    const double pq = psnr(img, quadtree_encode(img, budget).render());
    const double ph = psnr(img, haar2d_topm(img, budget));
    min_gap_q = std::min(min_gap_q, pw - pq);
    min_gap_h = std::min(min_gap_h, pw - ph);
    rec.expect(pw > pq, "seed " + std::to_string(seed) + ": wedgelet " + fmt(pw) + " dB <= quadtree " + fmt(pq));
    rec.expect(pw >= ph, "seed " + std::to_string(seed) + ": wedgelet " + fmt(pw) + " dB < haar " + fmt(ph));
  }
  rec.note("min PSNR margin over quadtree " + fmt(min_gap_q) + " dB, over haar " + fmt(min_gap_h) + " dB");
  return rec.result();
}

// 11. Error curves never increase.
Outcome monotonicity() {
  Recorder rec;
  std::mt19937_64 rng(111);
  struct Item {
    Graph g;
    Signal f;
    MetricKind kind;
  };
  std::vector<Item> items;
  for (int k = 0; k < 6; ++k) {
    Graph g = gen_er_graph(60, 0.08, 11000 + k);
    items.push_back({g, oracle::random_signal(g.size(), rng), MetricKind::Hop});
  }
  Graph grid = gen_grid_graph(20, 20);
  Signal f1 = halfplane_indicator(grid, 9.5);
  items.push_back({grid, f1, MetricKind::Hop});
  items.push_back({grid, gradient_blend(grid, f1, 0.1), MetricKind::CoordL2});
  items.push_back({grid, Signal(grid.size(), 5.0), MetricKind::CoordL1});
  items.push_back({grid, image_to_signal(diagonal_wedge_image(20, 20, 3)).signal, MetricKind::CoordLinf});
  items.push_back({grid, oracle::random_signal(grid.size(), rng, 0.0, 255.0), MetricKind::WeightedPath});
  std::vector<Strategy> strategies{Strategy::md(), Strategy::fa(), Strategy::randomized(10, 5)};
  std::size_t points = 0;
  for (const auto& it : items) {
    Metric metric(it.g, it.kind);
    auto curve = error_curve(metric, it.f, 0, strategies, std::min<std::size_t>(it.g.size(), 150));
    for (std::size_t s = 0; s < strategies.size(); ++s)
      for (std::size_t m = 1; m < curve.errors[s].size(); ++m, ++points)
        rec.expect(curve.errors[s][m] <= curve.errors[s][m - 1],
                   "strategy " + std::string(strategy_name(strategies[s].kind)) + " increases at m=" +
                       std::to_string(m + 1));
  }
  rec.note(std::to_string(points) + " consecutive pairs checked");
  return rec.result();
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
    double limit_s;
  };
  std::vector<TheoryCase> cases;
  auto cases_ready = [&]() -> const std::vector<TheoryCase>& {
    if (cases.empty()) cases = theory_cases();
    return cases;
  };
  const std::vector<Criterion> criteria = {
      {1, "exact reconstruction with M = n", exact_reconstruction, 10.0},
      {2, "tree-size law", tree_size_law, 0.0},
      {3, "wavelet identities", wavelet_identities, 0.0},
      {4, "Jackson estimate with explicit constant", [&] { return jackson(cases_ready()); }, 30.0},
      {5, "oscillation functional bounded by r-energy (r <= 1)", [&] { return mr_bound(cases_ready()); }, 0.0},
      {6, "fully adaptive per-step optimality", fa_optimality, 0.0},
      {7, "exhaustive Besov-type measure sanity", besov_sanity, 60.0},
      {8, "memory accounting and bitstream round trip", memory_accounting, 0.0},
      {9, "half-plane indicator recovery", indicator_recovery, 0.0},
      {10, "baseline ordering on wedge images", baseline_ordering, 0.0},
      {11, "monotone error curves", monotonicity, 0.0},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_s > 0.0 && secs > c.limit_s) {
      o.pass = false;
      o.detail += "; took " + fmt(secs) + " s, limit " + fmt(c.limit_s) + " s";
    }
    std::printf("%s criterion %d: %s (%s; %.2f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
