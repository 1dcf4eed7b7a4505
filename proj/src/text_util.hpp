#pragma once

// Line-oriented parsing helpers shared by the text file readers.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "gw/errors.hpp"

namespace gw::detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error reading " + path);
  return ss.str();
}

inline std::string_view trim(std::string_view s) {
  const char* ws = " \t\r\n\f\v";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

/// Iterates non-blank lines that do not start with `#`.
class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  bool next_data_line(std::string_view& line) {
    while (pos_ <= text_.size() && pos_ != std::string_view::npos) {
      auto end = text_.find('\n', pos_);
      auto raw = text_.substr(pos_, end == std::string_view::npos ? std::string_view::npos : end - pos_);
      pos_ = end == std::string_view::npos ? std::string_view::npos : end + 1;
      ++line_no_;
      auto t = trim(raw);
      if (t.empty() || t.front() == '#') continue;
      line = t;
      return true;
    }
    return false;
  }

  std::size_t line_no() const { return line_no_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_no_ = 0;
};

inline std::uint64_t parse_uint(std::string_view tok, const char* what, std::size_t line) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || p != tok.data() + tok.size())
    throw ParseError("line " + std::to_string(line) + ": invalid " + what + " '" + std::string(tok) + "'");
  return v;
}

inline double parse_double(std::string_view tok, const char* what, std::size_t line) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || p != tok.data() + tok.size() || !std::isfinite(v))
    throw ParseError("line " + std::to_string(line) + ": invalid " + what + " '" + std::string(tok) + "'");
  return v;
}

/// Shortest representation that round-trips; locale independent.
inline std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

}  // namespace gw::detail
