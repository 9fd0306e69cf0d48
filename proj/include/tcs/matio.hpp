#pragma once

// Plain-text matrix files:
//
//   % optional comment lines
//   <rows> <cols>
//   <cols values>      (one line per row, row-major)
//
// Values are written in shortest round-trip form, so write -> read
// reproduces every finite double bit for bit. A Matrix Market array reader
// ("%%MatrixMarket matrix array real general") is provided as well.

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "tcs/error.hpp"
#include "tcs/matcore.hpp"

namespace tcs {

enum class MatrixFormat { Native, MatrixMarket };

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

inline bool blank(std::string_view s) { return split_ws(s).empty(); }

inline bool comment(std::string_view s) {
  const auto p = s.find_first_not_of(" \t");
  return p != std::string_view::npos && s[p] == '%';
}

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::string& line) {
    if (!std::getline(in_, line)) return false;
    ++lineno_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }

  std::size_t lineno() const noexcept { return lineno_; }

 private:
  std::istream& in_;
  std::size_t lineno_ = 0;
};

inline double parse_double(std::string_view tok, std::size_t lineno) {
  std::string_view t = tok;
  if (!t.empty() && t.front() == '+') {
    t.remove_prefix(1);
    if (!t.empty() && t.front() == '-') throw ParseError(lineno, "invalid number '" + std::string(tok) + "'");
  }
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ptr != t.data() + t.size() || t.empty() || (ec != std::errc() && ec != std::errc::result_out_of_range)) {
    throw ParseError(lineno, "invalid number '" + std::string(tok) + "'");
  }
  if (ec == std::errc::result_out_of_range) v = std::strtod(std::string(t).c_str(), nullptr);
  if (!std::isfinite(v)) throw ValueError("non-finite value '" + std::string(tok) + "'", lineno);
  return v;
}

inline std::size_t parse_count(std::string_view tok, std::size_t lineno) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(lineno, "invalid dimension '" + std::string(tok) + "'");
  }
  return v;
}

inline void check_entry_count(std::size_t rows, std::size_t cols, std::size_t lineno) {
  constexpr std::size_t kMaxEntries = std::size_t{1} << 32;
  if (cols != 0 && rows > kMaxEntries / cols) {
    throw ParseError(lineno, "dimensions " + std::to_string(rows) + "x" + std::to_string(cols) +
                                 " are too large");
  }
}

}  // namespace detail

inline Mat read_matrix(std::istream& in) {
  detail::LineReader lines(in);
  std::string line;
  std::size_t rows = 0;
  std::size_t cols = 0;
  bool have_dims = false;
  while (lines.next(line)) {
    if (detail::comment(line) || detail::blank(line)) continue;
    const auto toks = detail::split_ws(line);
    if (toks.size() != 2) throw ParseError(lines.lineno(), "expected '<rows> <cols>'");
    rows = detail::parse_count(toks[0], lines.lineno());
    cols = detail::parse_count(toks[1], lines.lineno());
    have_dims = true;
    break;
  }
  if (!have_dims) throw ParseError(lines.lineno() + 1, "missing '<rows> <cols>' line");
  detail::check_entry_count(rows, cols, lines.lineno());

  Mat m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!lines.next(line)) {
      throw DimensionError("expected " + std::to_string(rows) + " rows, file ends after " +
                           std::to_string(i));
    }
    if (detail::comment(line)) throw ParseError(lines.lineno(), "comment inside matrix body");
    const auto toks = detail::split_ws(line);
    if (toks.size() != cols) {
      throw ParseError(lines.lineno(), "expected " + std::to_string(cols) + " values, found " +
                                           std::to_string(toks.size()));
    }
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = detail::parse_double(toks[j], lines.lineno());
  }
  while (lines.next(line)) {
    if (!detail::blank(line)) throw ParseError(lines.lineno(), "unexpected content after matrix body");
  }
  return m;
}

inline Mat read_matrix(std::string_view text) {
  std::istringstream in{std::string(text)};
  return read_matrix(in);
}

inline Mat read_matrix_market(std::istream& in) {
  detail::LineReader lines(in);
  std::string line;
  if (!lines.next(line)) throw ParseError(1, "empty Matrix Market file");
  {
    auto toks = detail::split_ws(line);
    auto lower = [](std::string_view s) {
      std::string out(s);
      for (char& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
      return out;
    };
    if (toks.size() != 5 || toks[0] != "%%MatrixMarket" || lower(toks[1]) != "matrix" ||
        lower(toks[2]) != "array" || lower(toks[3]) != "real" || lower(toks[4]) != "general") {
      throw ParseError(1, "expected '%%MatrixMarket matrix array real general'");
    }
  }
  std::size_t rows = 0;
  std::size_t cols = 0;
  bool have_dims = false;
  while (lines.next(line)) {
    if (detail::comment(line) || detail::blank(line)) continue;
    const auto toks = detail::split_ws(line);
    if (toks.size() != 2) throw ParseError(lines.lineno(), "expected '<rows> <cols>'");
    rows = detail::parse_count(toks[0], lines.lineno());
    cols = detail::parse_count(toks[1], lines.lineno());
    have_dims = true;
    break;
  }
  if (!have_dims) throw ParseError(lines.lineno() + 1, "missing '<rows> <cols>' line");
  detail::check_entry_count(rows, cols, lines.lineno());

  // Column-major values, any whitespace layout.
  Mat m(rows, cols);
  std::size_t k = 0;
  auto data = m.data();
  while (lines.next(line)) {
    if (detail::comment(line)) continue;
    for (auto tok : detail::split_ws(line)) {
      if (k == data.size()) throw ParseError(lines.lineno(), "more values than declared");
      data[k++] = detail::parse_double(tok, lines.lineno());
    }
  }
  if (k != data.size()) {
    throw DimensionError("expected " + std::to_string(data.size()) + " values, found " +
                         std::to_string(k));
  }
  return m;
}

inline void write_matrix(const Mat& m, std::ostream& out) {
  std::string buf;
  buf += std::to_string(m.rows()) + " " + std::to_string(m.cols()) + "\n";
  char num[32];
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) buf += ' ';
      const auto res = std::to_chars(num, num + sizeof num, m(i, j));
      buf.append(num, res.ptr);
    }
    buf += '\n';
  }
  out << buf;
  if (!out) throw IoError("write_matrix: stream write failed");
}

inline std::string to_text(const Mat& m) {
  std::ostringstream out;
  write_matrix(m, out);
  return out.str();
}

inline Mat read_matrix_file(const std::string& path, MatrixFormat fmt = MatrixFormat::Native) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return fmt == MatrixFormat::MatrixMarket ? read_matrix_market(in) : read_matrix(in);
}

inline void write_matrix_file(const std::string& path, const Mat& m) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_matrix(m, out);
  out.close();
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace tcs
