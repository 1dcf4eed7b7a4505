#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include "gw/besov.hpp"
#include "gw/codec.hpp"
#include "gw/encoder.hpp"
#include "gw/errors.hpp"
#include "gw/graph.hpp"
#include "gw/imaging.hpp"
#include "gw/metric.hpp"
#include "gw/synth.hpp"
#include "gw/wavelets.hpp"

namespace gw::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string graph, signal, image, coords, in, out, csv;
  std::size_t width = 0, height = 0;
  std::size_t M = 0;
  std::uint32_t K = 256;
  std::string strategy = "fa";
  std::size_t R = 50;
  std::optional<std::uint64_t> seed;
  std::string metric = "hop";
  std::string mode = "means";
  std::optional<std::size_t> mterm;
  std::string q1 = "0";
  bool induced = false;

  std::string model;
  std::size_t n = 0;
  double p = 0.1;
  std::optional<double> threshold;
  double alpha = 0.5;

  double r = 1.0;
  double rho = 2.0 / 3.0;
  std::size_t besov_max = 12;
};

struct Input {
  Graph graph;
  Signal f;
  bool has_signal = false;
};

std::string fmt(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

Graph load_graph_input(const Options& o) {
  if (!o.image.empty()) return image_to_signal(load_image(o.image)).graph;
  if (!o.graph.empty()) {
    Graph g = load_graph(o.graph);
    if (!o.coords.empty()) g = g.with_coords(load_coords(o.coords, g.size()));
    return g;
  }
  if (o.width > 0 && o.height > 0) return gen_grid_graph(o.width, o.height);
  throw UsageError("a graph is required: pass --graph, --image or --width/--height");
}

Input load_input(const Options& o, bool need_signal) {
  if (!o.image.empty()) {
    auto ig = image_to_signal(load_image(o.image));
    Input in{std::move(ig.graph), std::move(ig.signal), true};
    if (!o.signal.empty()) in.f = load_signal(o.signal, in.graph.size());
    return in;
  }
  Input in{load_graph_input(o), {}, false};
  if (!o.signal.empty()) {
    in.f = load_signal(o.signal, in.graph.size());
    in.has_signal = true;
  } else if (need_signal) {
    throw UsageError("--signal is required");
  }
  return in;
}

Metric make_metric(const Graph& g, const Options& o) {
  return Metric(g, parse_metric_kind(o.metric), o.induced ? MetricScope::Induced : MetricScope::Global);
}

Vertex choose_q1(const Options& o, std::size_t n) {
  if (o.q1 == "random") {
    if (!o.seed) throw UsageError("--q1 random requires --seed");
    std::mt19937_64 rng(*o.seed);
    return static_cast<Vertex>(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
  }
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(o.q1.data(), o.q1.data() + o.q1.size(), v);
  if (ec != std::errc{} || p != o.q1.data() + o.q1.size()) throw UsageError("--q1 must be a vertex index or 'random'");
  if (v >= n) throw RangeError("--q1 " + o.q1 + " is not a vertex of the graph");
  return static_cast<Vertex>(v);
}

Strategy make_strategy(const Options& o) {
  auto kind = parse_strategy_kind(o.strategy);
  if (kind == StrategyKind::Randomized) {
    if (!o.seed) throw UsageError("strategy r requires --seed");
    return Strategy::randomized(o.R, *o.seed);
  }
  Strategy s;
  s.kind = kind;
  return s;
}

ValueMode parse_mode(const std::string& s) {
  if (s == "means") return ValueMode::Means;
  if (s == "wavelets") return ValueMode::Wavelets;
  throw UsageError("--mode must be means or wavelets");
}

std::ofstream open_out(const std::string& path, bool binary = false) {
  std::ofstream f(path, binary ? std::ios::binary : std::ios::out);
  if (!f) throw IoError("cannot open " + path + " for writing");
  return f;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

double l2_distance(const Signal& a, const Signal& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

void write_signal_to(const Options& o, const Signal& f, std::ostream& out) {
  if (o.out.empty()) {
    write_signal(out, f);
    return;
  }
  auto file = open_out(o.out);
  write_signal(file, f);
  if (!file) throw IoError("failed writing " + o.out);
}

int cmd_encode(const Options& o, std::ostream& out) {
  if (o.out.empty()) throw UsageError("encode requires --out");
  auto in = load_input(o, true);
  Metric metric = make_metric(in.graph, o);
  Vertex q1 = choose_q1(o, in.graph.size());
  Strategy strategy = make_strategy(o);
  auto mode = parse_mode(o.mode);
  auto result = encode(metric, in.f, q1, o.M, strategy);
  auto values = stream_values(result.tree, in.f, mode);
  auto bytes = serialize(result.tree, metric, values, {mode, strategy.kind, o.K});
  {
    auto file = open_out(o.out, true);
    file.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!file) throw IoError("failed writing " + o.out);
  }
  auto decoded = deserialize(bytes, metric);
  auto rec = decoded.reconstruct();
  const std::size_t n = in.graph.size();
  out << "n=" << n << " M=" << o.M << " K=" << o.K << " strategy=" << o.strategy << " metric=" << o.metric
      << " q1=" << q1 << "\n";
  out << "l2_error=" << fmt(result.error_trace.back()) << " quantized_l2_error=" << fmt(l2_distance(rec, in.f)) << "\n";
  out << "bytes=" << bytes.size() << " payload_bits=" << packed_payload_bits(n, o.M, o.K)
      << " bits_per_node=" << fmt(bits_per_node(n, o.M, o.K)) << "\n";
  if (!o.image.empty() && in.graph.grid()) {
    auto shape = *in.graph.grid();
    out << "psnr=" << fmt(psnr(signal_to_image(in.f, shape.width, shape.height),
                              signal_to_image(rec, shape.width, shape.height)))
        << "\n";
  }
  return kOk;
}

int cmd_decode(const Options& o, std::ostream& out) {
  if (o.in.empty()) throw UsageError("decode requires --in");
  std::ifstream file(o.in, std::ios::binary);
  if (!file) throw IoError("cannot open " + o.in);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());
  auto header = read_stream(bytes).header;
  auto in = load_input(o, false);
  Metric metric(in.graph, header.metric, header.scope);
  auto decoded = deserialize(bytes, metric);
  auto rec = decoded.reconstruct(o.mterm);
  if (ends_with(o.out, ".pgm")) {
    if (!in.graph.grid()) throw InvariantError("image output needs a grid graph");
    save_pgm(o.out, signal_to_image(rec, in.graph.grid()->width, in.graph.grid()->height));
  } else {
    write_signal_to(o, rec, out);
  }
  if (in.has_signal && !o.out.empty()) out << "l2_error=" << fmt(l2_distance(rec, in.f)) << "\n";
  return kOk;
}

int cmd_analyze(const Options& o, std::ostream& out) {
  if (!o.seed) throw UsageError("analyze requires --seed for the randomized column");
  auto in = load_input(o, true);
  Metric metric = make_metric(in.graph, o);
  Vertex q1 = choose_q1(o, in.graph.size());
  std::vector<Strategy> strategies{Strategy::md(), Strategy::fa(), Strategy::randomized(o.R, *o.seed)};
  auto curve = error_curve(metric, in.f, q1, strategies, o.M);
  std::ostringstream csv;
  csv << "m,err_md,err_fa,err_r\n";
  for (std::size_t m = 1; m <= o.M; ++m)
    csv << m << ',' << fmt(curve.errors[0][m - 1]) << ',' << fmt(curve.errors[1][m - 1]) << ','
        << fmt(curve.errors[2][m - 1]) << '\n';
  if (o.csv.empty()) {
    out << csv.str();
  } else {
    auto f = open_out(o.csv);
    f << csv.str();
  }
  return kOk;
}

int cmd_compare(const Options& o, std::ostream& out) {
  if (o.image.empty()) throw UsageError("compare requires --image");
  GrayImage img = load_image(o.image);
  auto ig = image_to_signal(img);
  Metric metric = make_metric(ig.graph, o);
  Vertex q1 = choose_q1(o, ig.graph.size());
  Strategy strategy = make_strategy(o);
  auto result = encode(metric, ig.signal, q1, o.M, strategy);
  GrayImage wedge = signal_to_image(reconstruct_means(result.tree, result.leaf_means), img.width, img.height);
  auto values = stream_values(result.tree, ig.signal, ValueMode::Means);
  auto decoded = deserialize(serialize(result.tree, metric, values, {ValueMode::Means, strategy.kind, o.K}), metric);
  GrayImage wedge_q = signal_to_image(decoded.reconstruct(), img.width, img.height);
  auto qt = quadtree_encode(img, o.M);
  GrayImage quad = qt.render();
  GrayImage haar = haar2d_topm(img, o.M);

  std::ostringstream csv;
  csv << "method,pieces,psnr\n";
  csv << "wedgelet," << o.M << ',' << fmt(psnr(img, wedge)) << '\n';
  csv << "wedgelet_quantized," << o.M << ',' << fmt(psnr(img, wedge_q)) << '\n';
  csv << "quadtree," << qt.leaves.size() << ',' << fmt(psnr(img, quad)) << '\n';
  csv << "haar2d," << o.M << ',' << fmt(psnr(img, haar)) << '\n';
  if (o.csv.empty()) {
    out << csv.str();
  } else {
    auto f = open_out(o.csv);
    f << csv.str();
  }
  if (!o.out.empty()) {
    save_pgm(o.out + "_wedgelet.pgm", wedge);
    save_pgm(o.out + "_partition.pgm", render_partition(result.tree, ig.graph));
    save_pgm(o.out + "_quadtree.pgm", quad);
    save_pgm(o.out + "_haar2d.pgm", haar);
    save_pgm(o.out + "_details.pgm", render_details(img, wedge));
  }
  return kOk;
}

void write_coords(std::ostream& out, const Graph& g) {
  for (Vertex v = 0; v < g.size(); ++v) out << fmt(g.coord(v)[0]) << ' ' << fmt(g.coord(v)[1]) << '\n';
}

int cmd_gen(const Options& o, std::ostream& out) {
  auto emit = [&](auto&& writer) {
    if (o.out.empty()) {
      writer(out);
    } else {
      auto f = open_out(o.out);
      writer(f);
      if (!f) throw IoError("failed writing " + o.out);
    }
  };
  if (o.model == "er") {
    if (!o.seed) throw UsageError("gen er requires --seed");
    if (o.n == 0) throw UsageError("gen er requires --n");
    Graph g = gen_er_graph(o.n, o.p, *o.seed);
    emit([&](std::ostream& s) { write_edge_list(s, g); });
  } else if (o.model == "grid") {
    if (o.width == 0 || o.height == 0) throw UsageError("gen grid requires --width and --height");
    Graph g = gen_grid_graph(o.width, o.height);
    emit([&](std::ostream& s) { write_edge_list(s, g); });
    if (!o.coords.empty()) {
      auto f = open_out(o.coords);
      write_coords(f, g);
    }
  } else if (o.model == "f1" || o.model == "f4") {
    Graph g = load_graph_input(o);
    if (!g.has_coords()) throw UsageError("gen " + o.model + " needs coordinates (--coords or a grid)");
    double t = 0.0;
    if (o.threshold) {
      t = *o.threshold;
    } else {
      auto [lo, hi] = std::minmax_element(g.coords()->begin(), g.coords()->end(),
                                          [](const Point& a, const Point& b) { return a[0] < b[0]; });
      t = ((*lo)[0] + (*hi)[0]) / 2.0;
    }
    Signal f = halfplane_indicator(g, t);
    if (o.model == "f4") f = gradient_blend(g, f, o.alpha);
    emit([&](std::ostream& s) { write_signal(s, f); });
  } else if (o.model == "noise") {
    if (!o.seed) throw UsageError("gen noise requires --seed");
    std::size_t n = o.n > 0 ? o.n : load_graph_input(o).size();
    Signal f = random_signal(n, *o.seed);
    emit([&](std::ostream& s) { write_signal(s, f); });
  } else if (o.model == "wedge") {
    if (!o.seed) throw UsageError("gen wedge requires --seed");
    if (o.width == 0 || o.height == 0) throw UsageError("gen wedge requires --width and --height");
    if (o.out.empty()) throw UsageError("gen wedge requires --out");
    save_pgm(o.out, diagonal_wedge_image(o.width, o.height, *o.seed));
  } else {
    throw UsageError("--model must be one of er, grid, f1, f4, noise, wedge");
  }
  return kOk;
}

int cmd_theory(const Options& o, std::ostream& out) {
  auto in = load_input(o, true);
  Metric metric = make_metric(in.graph, o);
  Vertex q1 = choose_q1(o, in.graph.size());
  const double alpha = 1.0 / o.r - 0.5;
  auto result = encode(metric, in.f, q1, in.graph.size(), Strategy::fa());
  auto rep = jackson_check(result.tree, in.f, o.r);
  out << "jackson r=" << fmt(rep.r) << " alpha=" << fmt(rep.alpha) << " rho=" << fmt(rep.rho)
      << " C=" << fmt(rep.constant) << " N_r=" << fmt(rep.n_r) << " norm_f=" << fmt(rep.norm_f) << "\n";
  out << "mu,m,error,bound,holds\n";
  for (const auto& row : rep.rows)
    out << row.mu << ',' << row.m << ',' << fmt(row.error) << ',' << fmt(row.bound) << ','
        << (row.holds ? "yes" : "no") << '\n';
  out << "norm_bound_holds=" << (rep.norm_bound_holds ? "yes" : "no") << "\n";
  if (rep.m_r)
    out << "M_r=" << fmt(*rep.m_r) << " M_r_bound=" << fmt(*rep.m_r_bound) << " holds=" << (rep.m_r_holds ? "yes" : "no")
        << "\n";
  if (in.graph.size() <= o.besov_max) {
    auto b = besov_oracle(in.graph, in.f, alpha, o.r, o.rho, o.besov_max);
    out << "besov rho=" << fmt(o.rho) << " feasible=" << (b.feasible ? "yes" : "no") << " seminorm=" << fmt(b.seminorm)
        << " min_N_r=" << fmt(b.min_r_energy) << " ratio=" << fmt(b.ratio()) << "\n";
  } else {
    out << "besov skipped: n=" << in.graph.size() << " exceeds --besov-max " << o.besov_max << "\n";
  }
  return kOk;
}

void add_input_options(CLI::App* c, Options& o) {
  c->add_option("--graph", o.graph, "edge-list file");
  c->add_option("--coords", o.coords, "vertex coordinates, one 'x y' line per vertex");
  c->add_option("--signal", o.signal, "signal file, one value per line");
  c->add_option("--image", o.image, "PGM/PNG image used as a grid graph and signal");
  c->add_option("--width", o.width, "grid width");
  c->add_option("--height", o.height, "grid height");
}

void add_encoder_options(CLI::App* c, Options& o) {
  c->add_option("--strategy", o.strategy, "center rule")->check(CLI::IsMember({"md", "fa", "r"}));
  c->add_option("--R", o.R, "candidates per step for strategy r");
  c->add_option("--metric", o.metric, "distance")->check(CLI::IsMember({"hop", "wpath", "l1", "l2", "linf"}));
  c->add_option("--q1", o.q1, "first center: vertex index or 'random'");
  c->add_flag("--induced-metric", o.induced, "shortest paths inside each subset");
}

}  // namespace

std::uint64_t config_hash(const std::vector<std::string>& args) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const auto& a : args) {
    for (unsigned char c : a) {
      h ^= c;
      h *= 0x100000001b3ull;
    }
    h *= 0x100000001b3ull;
  }
  return h;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Adaptive wedge-partition compression of graph signals and images", "wedgelet"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  auto* enc = app.add_subcommand("encode", "greedy wedge encoding to a .bwpc stream");
  add_input_options(enc, o);
  add_encoder_options(enc, o);
  enc->add_option("--M", o.M, "number of centers")->required();
  enc->add_option("--K", o.K, "quantizer levels");
  enc->add_option("--seed", o.seed, "seed for randomized choices");
  enc->add_option("--mode", o.mode, "stored values")->check(CLI::IsMember({"means", "wavelets"}));
  enc->add_option("--out", o.out, "output stream");

  auto* dec = app.add_subcommand("decode", "reconstruct a signal or image from a stream");
  add_input_options(dec, o);
  dec->add_option("--in", o.in, "input stream")->required();
  dec->add_option("--mterm", o.mterm, "keep only the m largest wavelets");
  dec->add_option("--out", o.out, "output signal file, or .pgm for images");

  auto* ana = app.add_subcommand("analyze", "error curves of md, fa and r");
  add_input_options(ana, o);
  add_encoder_options(ana, o);
  ana->add_option("--M", o.M, "largest m")->required();
  ana->add_option("--seed", o.seed, "seed for strategy r");
  ana->add_option("--csv", o.csv, "CSV output path");

  auto* cmp = app.add_subcommand("compare", "wedgelets vs quadtree vs 2D Haar on an image");
  cmp->add_option("--image", o.image, "input image")->required();
  add_encoder_options(cmp, o);
  cmp->add_option("--M", o.M, "piece budget")->required();
  cmp->add_option("--K", o.K, "quantizer levels");
  cmp->add_option("--seed", o.seed, "seed for randomized choices");
  cmp->add_option("--csv", o.csv, "CSV output path");
  cmp->add_option("--out", o.out, "prefix for rendered PGM images");

  auto* gen = app.add_subcommand("gen", "generate graphs, signals and test images");
  add_input_options(gen, o);
  gen->add_option("--model", o.model, "er, grid, f1, f4, noise or wedge")->required();
  gen->add_option("--n", o.n, "vertex count");
  gen->add_option("--p", o.p, "edge probability");
  gen->add_option("--seed", o.seed, "random seed");
  gen->add_option("--threshold", o.threshold, "indicator cut on the x coordinate");
  gen->add_option("--alpha", o.alpha, "gradient weight for f4");
  gen->add_option("--out", o.out, "output path");

  auto* th = app.add_subcommand("theory", "Jackson and Besov checks on a complete fa tree");
  add_input_options(th, o);
  th->add_option("--metric", o.metric, "distance")->check(CLI::IsMember({"hop", "wpath", "l1", "l2", "linf"}));
  th->add_option("--q1", o.q1, "first center: vertex index or 'random'");
  th->add_option("--seed", o.seed, "seed for --q1 random");
  th->add_flag("--induced-metric", o.induced, "shortest paths inside each subset");
  th->add_option("--r", o.r, "energy exponent, alpha = 1/r - 1/2")->check(CLI::Range(1e-6, 2.0 - 1e-9));
  th->add_option("--rho", o.rho, "balance ratio for the exhaustive search");
  th->add_option("--besov-max", o.besov_max, "largest n for the exhaustive search");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  auto* sub = app.get_subcommands().front();
  err << "# wedgelet " << kVersion << " command=" << sub->get_name()
      << " seed=" << (o.seed ? std::to_string(*o.seed) : std::string("none")) << " config=" << std::hex
      << std::setw(16) << std::setfill('0') << config_hash(args) << std::dec << std::setfill(' ') << "\n";

  try {
    if (sub == enc) return cmd_encode(o, out);
    if (sub == dec) return cmd_decode(o, out);
    if (sub == ana) return cmd_analyze(o, out);
    if (sub == cmp) return cmd_compare(o, out);
    if (sub == gen) return cmd_gen(o, out);
    return cmd_theory(o, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const gw::Error& e) {
    err << "error: " << e.what() << "\n";
    return kData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kData;
  }
}

}  // namespace gw::cli
