#include "gw/imaging.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>

#include "gw/detail/compensated_sum.hpp"
#include "gw/errors.hpp"
#include "text_util.hpp"

#ifdef GW_HAVE_PNG
#include <png.h>
#endif

namespace gw {

GrayImage::GrayImage(std::size_t w, std::size_t h, double fill) : width(w), height(h), pixels(w * h, fill) {
  if (w == 0 || h == 0) throw RangeError("image dimensions must be positive");
}

namespace {

// Reads one header token, skipping whitespace and '#' comments.
std::string pgm_token(const std::string& bytes, std::size_t& pos) {
  for (;;) {
    while (pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
    if (pos < bytes.size() && bytes[pos] == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      continue;
    }
    break;
  }
  std::size_t start = pos;
  while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
  if (start == pos) throw ParseError("PGM header is truncated");
  return bytes.substr(start, pos - start);
}

void require_same_shape(const GrayImage& a, const GrayImage& b) {
  if (a.width != b.width || a.height != b.height) throw InvariantError("image dimensions differ");
}

#ifdef GW_HAVE_PNG
GrayImage load_png(const std::string& path) {
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&img, path.c_str())) throw IoError("cannot read PNG " + path + ": " + img.message);
  img.format = PNG_FORMAT_GRAY;
  std::vector<png_byte> buf(PNG_IMAGE_SIZE(img));
  if (!png_image_finish_read(&img, nullptr, buf.data(), 0, nullptr)) {
    std::string msg = img.message;
    png_image_free(&img);
    throw IoError("cannot decode PNG " + path + ": " + msg);
  }
  GrayImage out(img.width, img.height);
  for (std::size_t k = 0; k < buf.size(); ++k) out.pixels[k] = buf[k];
  return out;
}
#endif

}  // namespace

GrayImage parse_pgm(const std::string& bytes) {
  std::size_t pos = 0;
  if (pgm_token(bytes, pos) != "P5") throw ParseError("not a binary PGM (P5) image");
  auto w = detail::parse_uint(pgm_token(bytes, pos), "PGM width", 1);
  auto h = detail::parse_uint(pgm_token(bytes, pos), "PGM height", 1);
  auto maxval = detail::parse_uint(pgm_token(bytes, pos), "PGM maxval", 1);
  if (w == 0 || h == 0) throw ParseError("PGM dimensions must be positive");
  if (maxval == 0 || maxval > 255) throw ParseError("PGM maxval must lie in [1, 255]");
  if (pos >= bytes.size()) throw ParseError("PGM pixel data is missing");
  ++pos;  // single whitespace after maxval
  if (bytes.size() - pos < w * h) throw ParseError("PGM pixel data is truncated");
  GrayImage img(w, h);
  const double scale = 255.0 / static_cast<double>(maxval);
  for (std::size_t k = 0; k < w * h; ++k) {
    auto b = static_cast<unsigned char>(bytes[pos + k]);
    if (b > maxval) throw ParseError("PGM sample exceeds maxval");
    img.pixels[k] = static_cast<double>(b) * scale;
  }
  return img;
}

GrayImage load_pgm(const std::string& path) { return parse_pgm(detail::read_file(path)); }

std::string encode_pgm(const GrayImage& image) {
  std::string out = "P5\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
  out.reserve(out.size() + image.size());
  for (double v : image.pixels) {
    double c = std::isfinite(v) ? std::clamp(std::round(v), 0.0, 255.0) : 0.0;
    out.push_back(static_cast<char>(static_cast<unsigned char>(c)));
  }
  return out;
}

void save_pgm(const std::string& path, const GrayImage& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << encode_pgm(image);
  if (!out) throw IoError("failed writing " + path);
}

GrayImage load_image(const std::string& path) {
  std::string bytes = detail::read_file(path);
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5') return parse_pgm(bytes);
  if (bytes.size() >= 8 && static_cast<unsigned char>(bytes[0]) == 0x89 && bytes.compare(1, 3, "PNG") == 0) {
#ifdef GW_HAVE_PNG
    return load_png(path);
#else
    throw IoError("PNG support is not built in; convert " + path + " to PGM");
#endif
  }
  throw ParseError("unrecognised image format: " + path);
}

ImageGraph image_to_signal(const GrayImage& image) {
  if (image.width == 0 || image.height == 0) throw RangeError("empty image");
  return {gen_grid_graph(image.width, image.height), image.pixels};
}

GrayImage signal_to_image(const Signal& f, std::size_t width, std::size_t height) {
  GrayImage img(width, height);
  if (f.size() != img.size()) throw InvariantError("signal length does not match the image size");
  img.pixels = f;
  return img;
}

double mse(const GrayImage& a, const GrayImage& b) {
  require_same_shape(a, b);
  detail::CompensatedSum s;
  for (std::size_t k = 0; k < a.size(); ++k) {
    double d = a.pixels[k] - b.pixels[k];
    s.add(d * d);
  }
  return s.value() / static_cast<double>(a.size());
}

double psnr(const GrayImage& a, const GrayImage& b) {
  double e = mse(a, b);
  if (e == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(255.0 * 255.0 / e);
}

GrayImage QuadTree::render() const {
  GrayImage img(width, height);
  for (const auto& b : leaves)
    for (std::size_t y = b.y; y < b.y + b.height; ++y)
      for (std::size_t x = b.x; x < b.x + b.width; ++x) img.at(x, y) = b.mean;
  return img;
}

double QuadTree::total_sse() const {
  detail::CompensatedSum s;
  for (const auto& b : leaves) s.add(b.sse);
  return s.value();
}

namespace {

QuadBlock make_block(const GrayImage& img, std::size_t x, std::size_t y, std::size_t w, std::size_t h) {
  QuadBlock b{x, y, w, h, 0.0, 0.0};
  detail::CompensatedSum s;
  for (std::size_t yy = y; yy < y + h; ++yy)
    for (std::size_t xx = x; xx < x + w; ++xx) s.add(img.at(xx, yy));
  b.mean = s.value() / static_cast<double>(w * h);
  detail::CompensatedSum e;
  for (std::size_t yy = y; yy < y + h; ++yy)
    for (std::size_t xx = x; xx < x + w; ++xx) {
      double d = img.at(xx, yy) - b.mean;
      e.add(d * d);
    }
  b.sse = e.value();
  return b;
}

}  // namespace

QuadTree quadtree_encode(const GrayImage& image, std::size_t target_blocks) {
  if (target_blocks == 0) throw RangeError("quadtree target must be at least 1");
  if (target_blocks > image.size()) throw RangeError("quadtree target exceeds the pixel count");
  QuadTree qt{image.width, image.height, {}};
  qt.leaves.push_back(make_block(image, 0, 0, image.width, image.height));

  // Max-heap on (sse, -creation order) so that ties split the older block.
  using Entry = std::pair<double, std::size_t>;
  auto cmp = [](const Entry& a, const Entry& b) { return a.first < b.first || (a.first == b.first && a.second > b.second); };
  std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> heap(cmp);
  std::vector<char> alive{1};
  heap.push({qt.leaves[0].sse, 0});
  std::size_t count = 1;

  while (count < target_blocks && !heap.empty()) {
    auto [sse, id] = heap.top();
    heap.pop();
    if (sse <= 0.0) break;
    const QuadBlock b = qt.leaves[id];
    if (b.width == 1 && b.height == 1) continue;
    const std::size_t w0 = b.width / 2, h0 = b.height / 2;
    std::vector<QuadBlock> kids;
    if (b.width >= 2 && b.height >= 2) {
      kids.push_back(make_block(image, b.x, b.y, w0, h0));
      kids.push_back(make_block(image, b.x + w0, b.y, b.width - w0, h0));
      kids.push_back(make_block(image, b.x, b.y + h0, w0, b.height - h0));
      kids.push_back(make_block(image, b.x + w0, b.y + h0, b.width - w0, b.height - h0));
    } else if (b.width >= 2) {
      kids.push_back(make_block(image, b.x, b.y, w0, 1));
      kids.push_back(make_block(image, b.x + w0, b.y, b.width - w0, 1));
    } else {
      kids.push_back(make_block(image, b.x, b.y, 1, h0));
      kids.push_back(make_block(image, b.x, b.y + h0, 1, b.height - h0));
    }
    alive[id] = 0;
    for (auto& k : kids) {
      heap.push({k.sse, qt.leaves.size()});
      qt.leaves.push_back(k);
      alive.push_back(1);
    }
    count += kids.size() - 1;
  }

  std::vector<QuadBlock> leaves;
  leaves.reserve(count);
  for (std::size_t k = 0; k < qt.leaves.size(); ++k)
    if (alive[k]) leaves.push_back(qt.leaves[k]);
  qt.leaves = std::move(leaves);
  return qt;
}

namespace {

void haar_1d(double* data, std::size_t len, std::size_t stride, std::vector<double>& tmp) {
  const double s = 1.0 / std::sqrt(2.0);
  const std::size_t half = len / 2;
  tmp.resize(len);
  for (std::size_t k = 0; k < half; ++k) {
    double a = data[2 * k * stride], b = data[(2 * k + 1) * stride];
    tmp[k] = (a + b) * s;
    tmp[half + k] = (a - b) * s;
  }
  for (std::size_t k = 0; k < len; ++k) data[k * stride] = tmp[k];
}

void ihaar_1d(double* data, std::size_t len, std::size_t stride, std::vector<double>& tmp) {
  const double s = 1.0 / std::sqrt(2.0);
  const std::size_t half = len / 2;
  tmp.resize(len);
  for (std::size_t k = 0; k < half; ++k) {
    double a = data[k * stride], d = data[(half + k) * stride];
    tmp[2 * k] = (a + d) * s;
    tmp[2 * k + 1] = (a - d) * s;
  }
  for (std::size_t k = 0; k < len; ++k) data[k * stride] = tmp[k];
}

}  // namespace

HaarTransform haar2d_forward(const GrayImage& image) {
  HaarTransform t;
  t.side = std::bit_ceil(std::max(image.width, image.height));
  t.levels = std::min<std::size_t>(6, static_cast<std::size_t>(std::countr_zero(t.side)));
  t.coeffs.assign(t.side * t.side, 0.0);
  for (std::size_t y = 0; y < image.height; ++y)
    for (std::size_t x = 0; x < image.width; ++x) t.coeffs[y * t.side + x] = image.at(x, y);
  std::vector<double> tmp;
  std::size_t len = t.side;
  for (std::size_t level = 0; level < t.levels; ++level, len /= 2) {
    for (std::size_t y = 0; y < len; ++y) haar_1d(&t.coeffs[y * t.side], len, 1, tmp);
    for (std::size_t x = 0; x < len; ++x) haar_1d(&t.coeffs[x], len, t.side, tmp);
  }
  return t;
}

GrayImage haar2d_inverse(const HaarTransform& t, std::size_t width, std::size_t height) {
  std::vector<double> c = t.coeffs;
  std::vector<double> tmp;
  for (std::size_t level = t.levels; level-- > 0;) {
    std::size_t len = t.side >> level;
    for (std::size_t x = 0; x < len; ++x) ihaar_1d(&c[x], len, t.side, tmp);
    for (std::size_t y = 0; y < len; ++y) ihaar_1d(&c[y * t.side], len, 1, tmp);
  }
  GrayImage img(width, height);
  for (std::size_t y = 0; y < height; ++y)
    for (std::size_t x = 0; x < width; ++x) img.at(x, y) = c[y * t.side + x];
  return img;
}

GrayImage haar2d_topm(const GrayImage& image, std::size_t m) {
  if (m == 0) throw RangeError("haar2d_topm needs m >= 1");
  auto t = haar2d_forward(image);
  if (m < t.coeffs.size()) {
    std::vector<std::size_t> order(t.coeffs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return std::abs(t.coeffs[a]) > std::abs(t.coeffs[b]); });
    for (std::size_t k = m; k < order.size(); ++k) t.coeffs[order[k]] = 0.0;
  }
  return haar2d_inverse(t, image.width, image.height);
}

GrayImage render_partition(const BwpTree& tree, const Graph& grid_graph) {
  if (!grid_graph.grid()) throw InvariantError("partition rendering needs a grid graph");
  const auto shape = *grid_graph.grid();
  if (tree.vertex_count() != grid_graph.size()) throw InvariantError("tree and graph sizes differ");
  GrayImage img(shape.width, shape.height);
  for (Vertex v = 0; v < grid_graph.size(); ++v)
    img.pixels[v] = static_cast<double>((73 * tree.owner(v)) % 256);
  return img;
}

GrayImage render_details(const GrayImage& a, const GrayImage& b) {
  require_same_shape(a, b);
  GrayImage out(a.width, a.height);
  for (std::size_t k = 0; k < a.size(); ++k) out.pixels[k] = std::abs(a.pixels[k] - b.pixels[k]);
  return out;
}

}  // namespace gw
