#include "gw/wavelets.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gw/detail/compensated_sum.hpp"
#include "gw/errors.hpp"

namespace gw {

namespace {

// Relative slack for inequality checks evaluated in floating point.
constexpr double kSlack = 1e-12;

WaveletDecomposition from_leaf_sums(const BwpTree& tree, std::span<const double> leaf_sums) {
  auto nodes = tree.nodes();
  std::vector<double> sum(nodes.size(), 0.0);
  for (std::size_t i = 0; i < tree.center_count(); ++i) sum[tree.leaf_node(i)] = leaf_sums[i];
  // Children always have larger ids than their parent.
  for (std::size_t id = nodes.size(); id-- > 1;) sum[static_cast<std::size_t>(nodes[id].parent)] += sum[id];
  auto mean = [&](std::size_t id) { return sum[id] / static_cast<double>(nodes[id].size); };

  WaveletDecomposition dec;
  dec.n = tree.vertex_count();
  dec.root = mean(0);
  dec.splits.reserve(tree.splits().size());
  for (const auto& s : tree.splits()) {
    WaveletSplit w;
    w.j = s.j;
    w.m = s.m;
    w.plus_size = nodes[s.plus].size;
    w.minus_size = nodes[s.minus].size;
    w.c_plus = mean(s.plus) - mean(s.parent);
    w.c_minus = mean(s.minus) - mean(s.parent);
    dec.splits.push_back(w);
  }
  return dec;
}

void check_matches(const BwpTree& tree, const WaveletDecomposition& dec) {
  if (dec.n != tree.vertex_count() || dec.splits.size() != tree.splits().size())
    throw InvariantError("wavelet decomposition does not match the tree");
}

double l2_distance(const Signal& a, const Signal& b) {
  detail::CompensatedSum s;
  for (std::size_t v = 0; v < a.size(); ++v) {
    double d = a[v] - b[v];
    s.add(d * d);
  }
  return std::sqrt(s.value());
}

}  // namespace

std::vector<double> WaveletDecomposition::norms() const {
  std::vector<double> out;
  out.reserve(wavelet_count());
  out.push_back(std::abs(root) * std::sqrt(static_cast<double>(n)));
  for (const auto& s : splits) {
    out.push_back(std::abs(s.c_plus) * std::sqrt(static_cast<double>(s.plus_size)));
    out.push_back(std::abs(s.c_minus) * std::sqrt(static_cast<double>(s.minus_size)));
  }
  return out;
}

WaveletDecomposition decompose(const BwpTree& tree, const Signal& f) {
  if (f.size() != tree.vertex_count()) throw InvariantError("signal length does not match the tree");
  std::vector<double> sums(tree.center_count());
  for (std::size_t i = 0; i < sums.size(); ++i) {
    detail::CompensatedSum s;
    for (Vertex v : tree.leaf(i)) s.add(f[v]);
    sums[i] = s.value();
  }
  return from_leaf_sums(tree, sums);
}

WaveletDecomposition decompose_leaf_means(const BwpTree& tree, std::span<const double> leaf_means) {
  if (leaf_means.size() != tree.center_count()) throw InvariantError("leaf mean count does not match the tree");
  std::vector<double> sums(leaf_means.size());
  for (std::size_t i = 0; i < sums.size(); ++i) sums[i] = leaf_means[i] * static_cast<double>(tree.leaf(i).size());
  return from_leaf_sums(tree, sums);
}

WaveletDecomposition decomposition_from_plus(const BwpTree& tree, double root, std::span<const double> c_plus) {
  if (c_plus.size() != tree.splits().size()) throw InvariantError("coefficient count does not match the tree");
  auto nodes = tree.nodes();
  WaveletDecomposition dec;
  dec.n = tree.vertex_count();
  dec.root = root;
  for (std::size_t k = 0; k < c_plus.size(); ++k) {
    const auto& s = tree.splits()[k];
    WaveletSplit w;
    w.j = s.j;
    w.m = s.m;
    w.plus_size = nodes[s.plus].size;
    w.minus_size = nodes[s.minus].size;
    w.c_plus = c_plus[k];
    w.c_minus = -static_cast<double>(w.plus_size) / static_cast<double>(w.minus_size) * c_plus[k];
    dec.splits.push_back(w);
  }
  return dec;
}

Signal reconstruct_means(const BwpTree& tree, std::span<const double> leaf_means) {
  if (leaf_means.size() != tree.center_count()) throw InvariantError("leaf mean count does not match the tree");
  Signal out(tree.vertex_count());
  for (Vertex v = 0; v < out.size(); ++v) out[v] = leaf_means[tree.owner(v)];
  return out;
}

std::vector<std::size_t> wavelet_order(const WaveletDecomposition& dec) {
  auto norms = dec.norms();
  std::vector<std::size_t> order(norms.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Canonical index order already encodes (level, side), so a stable sort
  // gives the documented tie rule.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return norms[a] > norms[b]; });
  return order;
}

Signal reconstruct_wavelets(const BwpTree& tree, const WaveletDecomposition& dec, std::optional<std::size_t> mterm) {
  check_matches(tree, dec);
  std::vector<char> keep(dec.wavelet_count(), 1);
  if (mterm) {
    if (*mterm > dec.wavelet_count()) throw RangeError("m-term count exceeds the number of wavelets");
    std::fill(keep.begin(), keep.end(), 0);
    auto order = wavelet_order(dec);
    for (std::size_t k = 0; k < *mterm; ++k) keep[order[k]] = 1;
  }
  std::vector<double> value(tree.node_count(), 0.0);
  value[0] = keep[0] ? dec.root : 0.0;
  for (std::size_t k = 0; k < dec.splits.size(); ++k) {
    const auto& s = tree.splits()[k];
    value[s.plus] = value[s.parent] + (keep[1 + 2 * k] ? dec.splits[k].c_plus : 0.0);
    value[s.minus] = value[s.parent] + (keep[2 + 2 * k] ? dec.splits[k].c_minus : 0.0);
  }
  Signal out(tree.vertex_count());
  for (Vertex v = 0; v < out.size(); ++v) out[v] = value[tree.leaf_node(tree.owner(v))];
  return out;
}

double m_term_error(const BwpTree& tree, const Signal& f, std::size_t m) {
  auto dec = decompose(tree, f);
  if (m < 1 || m > dec.wavelet_count()) throw RangeError("m-term count out of range");
  return l2_distance(f, reconstruct_wavelets(tree, dec, m));
}

double r_energy(const WaveletDecomposition& dec, double r) {
  if (!(r > 0.0)) throw RangeError("r-energy needs r > 0");
  detail::CompensatedSum s;
  for (double nrm : dec.norms()) s.add(std::pow(nrm, r));
  return std::pow(s.value(), 1.0 / r);
}

double r_energy(const BwpTree& tree, const Signal& f, double r) { return r_energy(decompose(tree, f), r); }

void check_smoothness_relation(double alpha, double r) {
  if (!(r > 0.0) || !(alpha > 0.0) || std::abs(1.0 / r - (alpha + 0.5)) > 1e-12)
    throw RangeError("exponents must satisfy 1/r = alpha + 1/2 with alpha > 0");
}

double mr_functional(const BwpTree& tree, const Signal& f, double alpha, double r) {
  check_smoothness_relation(alpha, r);
  if (f.size() != tree.vertex_count()) throw InvariantError("signal length does not match the tree");
  auto members = tree.all_node_members();
  detail::CompensatedSum total;
  for (const auto& W : members) {
    if (W.size() < 2) continue;
    auto oscillation = [&](Vertex w) {
      detail::CompensatedSum s;
      for (Vertex v : W) s.add(std::pow(std::abs(f[v] - f[w]), r));
      return s.value();
    };
    double sup = 0.0;
    if (r >= 1.0) {
      // Convex in f(w): the supremum sits at an extreme value.
      auto [lo, hi] = std::minmax_element(W.begin(), W.end(), [&](Vertex a, Vertex b) { return f[a] < f[b]; });
      sup = std::max(oscillation(*lo), oscillation(*hi));
    } else {
      for (Vertex w : W) sup = std::max(sup, oscillation(w));
    }
    total.add(std::pow(static_cast<double>(W.size()), -alpha * r) * sup);
  }
  return std::pow(total.value(), 1.0 / r);
}

bool JacksonReport::all_hold() const {
  return norm_bound_holds && m_r_holds &&
         std::all_of(rows.begin(), rows.end(), [](const JacksonRow& row) { return row.holds; });
}

JacksonReport jackson_check(const BwpTree& tree, const Signal& f, double r) {
  if (!(r > 0.0 && r < 2.0)) throw RangeError("Jackson check needs 0 < r < 2");
  if (!tree.complete()) throw InvariantError("Jackson check needs a complete tree");
  if (tree.vertex_count() < 2) throw InvariantError("Jackson check needs at least two vertices");

  JacksonReport rep;
  rep.r = r;
  rep.alpha = 1.0 / r - 0.5;
  rep.rho = balance_ratio(tree);
  rep.constant = 2.0 / std::sqrt(1.0 - std::sqrt(rep.rho));

  auto dec = decompose(tree, f);
  rep.n_r = r_energy(dec, r);
  {
    detail::CompensatedSum s;
    for (double v : f) s.add(v * v);
    rep.norm_f = std::sqrt(s.value());
  }
  rep.norm_bound_holds = rep.norm_f <= (rep.constant + 1.0) * rep.n_r * (1.0 + kSlack);

  auto norms = dec.norms();
  std::vector<double> sorted(norms);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const auto positive = static_cast<std::size_t>(
      std::count_if(sorted.begin(), sorted.end(), [](double x) { return x > 0.0; }));

  if (rep.n_r > 0.0) {
    std::size_t last_m = 0;
    for (int mu = 0; mu <= 1100 && last_m < positive; ++mu) {
      const double threshold = std::ldexp(rep.n_r, -mu);
      auto m = static_cast<std::size_t>(
          std::upper_bound(sorted.begin(), sorted.end(), threshold, std::greater<>()) - sorted.begin());
      if (m == 0 || m == last_m) continue;
      last_m = m;
      JacksonRow row;
      row.mu = mu;
      row.m = m;
      row.error = l2_distance(f, reconstruct_wavelets(tree, dec, m));
      row.bound = rep.constant * std::pow(static_cast<double>(m), -rep.alpha) * rep.n_r;
      row.holds = row.error <= row.bound * (1.0 + kSlack) + kSlack * rep.norm_f;
      rep.rows.push_back(row);
    }
  }

  if (r <= 1.0) {
    const double t = std::pow(rep.rho, rep.alpha * r);
    rep.m_r = mr_functional(tree, f, rep.alpha, r);
    rep.m_r_bound = std::pow(t / (1.0 - t), 1.0 / r) * rep.n_r;
    rep.m_r_holds = *rep.m_r <= *rep.m_r_bound * (1.0 + kSlack) + kSlack * rep.norm_f;
  }
  return rep;
}

}  // namespace gw
