#include "arm/matrix_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string_view>
#include <vector>

namespace arm {
namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  return out;
}

void finish_write(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

double parse_double(std::string_view token, std::size_t line) {
  token = trim(token);
  if (token.empty()) throw FormatError("empty field", line);
  if (token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end)
    throw FormatError("cannot parse '" + std::string(token) + "' as a number", line);
  if (!std::isfinite(value)) throw FormatError("non-finite entry '" + std::string(token) + "'", line);
  return value;
}

// Splits on '\n', yielding (1-based line number, content).
template <typename Fn>
void for_each_line(const std::string& text, Fn&& fn) {
  std::size_t start = 0;
  std::size_t line = 1;
  while (start <= text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string::npos) nl = text.size();
    fn(line, std::string_view(text).substr(start, nl - start));
    if (nl == text.size()) break;
    start = nl + 1;
    ++line;
  }
}

void write_matrix_values(std::ostream& out, const Matrix& m, MatrixFormat format) {
  out << std::setprecision(17);
  if (format == MatrixFormat::Csv) {
    for (Index i = 0; i < m.rows(); ++i) {
      for (Index j = 0; j < m.cols(); ++j) {
        if (j > 0) out << ',';
        out << m(i, j);
      }
      out << '\n';
    }
  } else {
    out << "%%MatrixMarket matrix array real general\n";
    out << m.rows() << ' ' << m.cols() << '\n';
    for (Index j = 0; j < m.cols(); ++j)
      for (Index i = 0; i < m.rows(); ++i) out << m(i, j) << '\n';
  }
}

}  // namespace

MatrixFormat parse_matrix_format(const std::string& name) {
  if (name == "csv") return MatrixFormat::Csv;
  if (name == "mm" || name == "mtx" || name == "matrix-market") return MatrixFormat::MatrixMarket;
  throw std::invalid_argument("unknown matrix format '" + name + "' (expected csv or mm)");
}

MatrixFormat format_from_path(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  return (ext == ".mtx" || ext == ".mm") ? MatrixFormat::MatrixMarket : MatrixFormat::Csv;
}

Matrix parse_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::size_t width = 0;
  for_each_line(text, [&](std::size_t line, std::string_view content) {
    if (trim(content).empty()) return;
    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      auto comma = content.find(',', start);
      const bool last = comma == std::string_view::npos;
      row.push_back(parse_double(content.substr(start, last ? std::string_view::npos : comma - start), line));
      if (last) break;
      start = comma + 1;
    }
    if (rows.empty()) {
      width = row.size();
    } else if (row.size() != width) {
      throw FormatError("ragged row: expected " + std::to_string(width) + " values, found " +
                            std::to_string(row.size()),
                        line);
    }
    rows.push_back(std::move(row));
  });
  if (rows.empty()) throw FormatError("empty matrix file", 0);

  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(width));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  return m;
}

Matrix parse_matrix_market(const std::string& text) {
  bool header_seen = false;
  Index rows = -1, cols = -1;
  std::vector<double> values;
  std::size_t last_line = 0;
  for_each_line(text, [&](std::size_t line, std::string_view content) {
    last_line = line;
    auto t = trim(content);
    if (!header_seen) {
      if (t.empty()) return;
      std::istringstream hs{std::string(t)};
      std::string banner, object, layout, field, symmetry;
      hs >> banner >> object >> layout >> field >> symmetry;
      if (banner != "%%MatrixMarket" || object != "matrix" || layout != "array" || field != "real" ||
          symmetry != "general")
        throw FormatError("expected '%%MatrixMarket matrix array real general' header", line);
      header_seen = true;
      return;
    }
    if (t.empty() || t.front() == '%') return;
    if (rows < 0) {
      std::istringstream ds{std::string(t)};
      std::string extra;
      if (!(ds >> rows >> cols) || (ds >> extra) || rows < 1 || cols < 1)
        throw FormatError("invalid size line '" + std::string(t) + "'", line);
      values.reserve(static_cast<std::size_t>(rows * cols));
      return;
    }
    if (values.size() == static_cast<std::size_t>(rows * cols))
      throw FormatError("more values than the declared " + std::to_string(rows) + "x" + std::to_string(cols), line);
    values.push_back(parse_double(t, line));
  });
  if (!header_seen) throw FormatError("empty matrix file", 0);
  if (rows < 0) throw FormatError("missing size line", last_line);
  if (values.size() != static_cast<std::size_t>(rows * cols))
    throw FormatError("expected " + std::to_string(rows * cols) + " values, found " + std::to_string(values.size()),
                      last_line);
  return Eigen::Map<const Matrix>(values.data(), rows, cols);
}

ClusterLabels parse_labels(const std::string& text) {
  std::vector<long long> raw;
  for_each_line(text, [&](std::size_t line, std::string_view content) {
    auto t = trim(content);
    if (t.empty()) return;
    if (t.front() == '+') t.remove_prefix(1);
    long long v = 0;
    const auto* end = t.data() + t.size();
    auto [ptr, ec] = std::from_chars(t.data(), end, v);
    if (ec != std::errc() || ptr != end)
      throw FormatError("cannot parse '" + std::string(t) + "' as an integer label", line);
    raw.push_back(v);
  });
  if (raw.empty()) throw FormatError("empty label file", 0);
  return ClusterLabels::from_raw(raw);
}

Matrix load_matrix(const std::filesystem::path& path, MatrixFormat format) {
  const auto text = read_file(path);
  return format == MatrixFormat::Csv ? parse_csv(text) : parse_matrix_market(text);
}

Matrix load_matrix(const std::filesystem::path& path) { return load_matrix(path, format_from_path(path)); }

void save_matrix(const Matrix& m, const std::filesystem::path& path, MatrixFormat format) {
  if (m.rows() < 1 || m.cols() < 1) throw std::invalid_argument("cannot save an empty matrix");
  if (!m.allFinite()) throw std::invalid_argument("cannot save a matrix with non-finite entries");
  auto out = open_for_write(path);
  write_matrix_values(out, m, format);
  finish_write(out, path);
}

void save_matrix(const Matrix& m, const std::filesystem::path& path) { save_matrix(m, path, format_from_path(path)); }

ClusterLabels load_labels(const std::filesystem::path& path) { return parse_labels(read_file(path)); }

void save_labels(const ClusterLabels& labels, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  for (int id : labels.ids) out << id << '\n';
  finish_write(out, path);
}

}  // namespace arm
