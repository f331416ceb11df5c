#include "quartz/libsvm.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string_view>

#include "quartz/errors.hpp"

namespace quartz {

namespace {

bool parse_double(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

bool parse_index(std::string_view s, std::size_t& out) {
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

std::string_view strip_comment(std::string_view line) {
  const auto hash = line.find('#');
  if (hash != std::string_view::npos) line = line.substr(0, hash);
  return line;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace

LoadedData read_libsvm(std::istream& in, const LibsvmOptions& options) {
  LoadedData out;
  std::vector<std::vector<Entry>> columns;
  std::size_t max_index = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tokens = split_ws(strip_comment(line));
    if (tokens.empty()) continue;

    double label = 0.0;
    if (!parse_double(tokens[0], label)) {
      throw DataError("malformed label '" + std::string(tokens[0]) + "'", lineno);
    }
    if (label != 1.0 && label != -1.0) {
      throw DataError("label must be +1 or -1, got '" + std::string(tokens[0]) + "'", lineno);
    }
    const int y = label > 0 ? 1 : -1;

    std::vector<Entry> col;
    col.reserve(tokens.size() - 1);
    for (std::size_t t = 1; t < tokens.size(); ++t) {
      const auto tok = tokens[t];
      const auto colon = tok.find(':');
      std::size_t idx = 0;
      double val = 0.0;
      if (colon == std::string_view::npos || !parse_index(tok.substr(0, colon), idx) ||
          !parse_double(tok.substr(colon + 1), val)) {
        throw DataError("malformed feature '" + std::string(tok) + "'", lineno);
      }
      if (idx == 0) throw DataError("feature indices are 1-based, got 0", lineno);
      if (options.features && idx > *options.features) {
        throw DataError("feature index " + std::to_string(idx) + " exceeds the declared " +
                            std::to_string(*options.features) + " features",
                        lineno);
      }
      if (!std::isfinite(val)) throw DataError("non-finite feature value", lineno);
      max_index = std::max(max_index, idx);
      col.push_back({idx - 1, y * val});
    }
    std::vector<bool> seen;
    for (const auto& e : col) {
      if (e.row >= seen.size()) seen.resize(e.row + 1, false);
      if (seen[e.row]) {
        out.warnings.push_back("line " + std::to_string(lineno) + ": duplicate feature " +
                               std::to_string(e.row + 1) + ", keeping the last value");
      }
      seen[e.row] = true;
    }
    columns.push_back(std::move(col));
    out.labels.push_back(y);
  }
  if (columns.empty()) throw DataError("no examples in input");
  const std::size_t d = options.features.value_or(max_index);
  if (d == 0) throw DataError("no features in input");
  out.matrix = DataMatrix(d, std::move(columns));
  if (options.normalize) out.matrix = normalize_columns(out.matrix);
  return out;
}

LoadedData load_libsvm(const std::filesystem::path& path, const LibsvmOptions& options) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return read_libsvm(in, options);
}

void write_libsvm(std::ostream& out, const DataMatrix& matrix) {
  for (std::size_t i = 0; i < matrix.cols(); ++i) {
    out << "+1";
    const auto rows = matrix.col_rows(i);
    const auto vals = matrix.col_values(i);
    for (std::size_t q = 0; q < rows.size(); ++q) {
      out << ' ' << rows[q] + 1 << ':' << format_double(vals[q]);
    }
    out << '\n';
  }
}

DataMatrix normalize_columns(const DataMatrix& matrix) {
  std::vector<double> scales(matrix.cols(), 1.0);
  for (std::size_t i = 0; i < matrix.cols(); ++i) {
    const double norm = std::sqrt(matrix.col_sq_norm(i));
    // Columns already at unit norm stay bit-identical.
    if (norm > 0.0 && std::abs(norm - 1.0) > 4.0 * std::numeric_limits<double>::epsilon()) {
      scales[i] = 1.0 / norm;
    }
  }
  return matrix.scale_columns(scales);
}

Partition read_partition(std::istream& in) {
  Partition groups;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tokens = split_ws(strip_comment(line));
    if (tokens.empty()) continue;
    std::vector<std::size_t> g;
    for (auto tok : tokens) {
      std::size_t idx = 0;
      if (!parse_index(tok, idx)) {
        throw DataError("malformed partition index '" + std::string(tok) + "'", lineno);
      }
      g.push_back(idx);
    }
    groups.push_back(std::move(g));
  }
  if (groups.empty()) throw DataError("partition file has no groups");
  return groups;
}

Partition load_partition(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return read_partition(in);
}

void write_partition(std::ostream& out, const Partition& groups) {
  for (const auto& g : groups) {
    for (std::size_t q = 0; q < g.size(); ++q) out << (q ? " " : "") << g[q];
    out << '\n';
  }
}

}  // namespace quartz
