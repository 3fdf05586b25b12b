#include "mdl/pipeline/expression.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "mdl/error.hpp"

namespace mdl {

const char* to_string(Split split) noexcept { return split == Split::train ? "train" : "test"; }

std::vector<std::size_t> ExpressionMatrix::columns(Split which) const {
  std::vector<std::size_t> cols;
  for (std::size_t s = 0; s < split.size(); ++s)
    if (split[s] == which) cols.push_back(s);
  return cols;
}

void validate(const ExpressionMatrix& m) {
  if (m.values.size() != m.genes() * m.samples())
    throw Error(ErrorCode::invalid_argument, "expression values do not match genes x samples");
  if (m.labels.size() != m.samples() || m.split.size() != m.samples())
    throw Error(ErrorCode::invalid_argument, "labels or split do not match the number of samples");
  for (std::size_t c : m.labels)
    if (c >= m.classes()) throw Error(ErrorCode::invalid_argument, "sample label out of range");
  if (m.columns(Split::train).empty()) throw Error(ErrorCode::invalid_argument, "matrix has no train columns");
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n'))
    s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

struct Cell {
  std::string text;
  std::size_t column;  // 1-based character column
};

std::vector<Cell> split_line(const std::string& line, char delim) {
  std::vector<Cell> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t end = line.find(delim, start);
    const std::string_view raw = std::string_view(line).substr(start, end == std::string::npos ? end : end - start);
    cells.push_back({std::string(trim(raw)), start + 1});
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return cells;
}

char detect_delimiter(const std::string& line) { return line.find('\t') != std::string::npos ? '\t' : ','; }

bool blank(const std::string& line) { return trim(line).empty(); }

[[noreturn]] void parse_error(const std::string& name, std::size_t line, std::size_t column, const std::string& what) {
  throw Error(ErrorCode::parse, name + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what);
}

double parse_number(const Cell& cell, const std::string& name, std::size_t line) {
  std::string_view t = cell.text;
  if (!t.empty() && t.front() == '+') t.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v))
    parse_error(name, line, cell.column, "expected a finite number, got '" + cell.text + "'");
  return v;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

ExpressionMatrix parse_matrix(std::istream& matrix, std::istream& labels, const std::string& matrix_name,
                              const std::string& labels_name) {
  ExpressionMatrix m;
  std::string line;
  std::size_t line_no = 0;
  char delim = ',';
  bool have_header = false;
  while (std::getline(matrix, line)) {
    ++line_no;
    if (blank(line)) continue;
    if (!have_header) {
      delim = detect_delimiter(line);
      const auto cells = split_line(line, delim);
      if (cells.size() < 2) parse_error(matrix_name, line_no, 1, "header needs at least one sample id");
      std::set<std::string> seen;
      for (std::size_t i = 1; i < cells.size(); ++i) {
        if (cells[i].text.empty()) parse_error(matrix_name, line_no, cells[i].column, "empty sample id");
        if (!seen.insert(cells[i].text).second)
          parse_error(matrix_name, line_no, cells[i].column, "duplicate sample id '" + cells[i].text + "'");
        m.sample_ids.push_back(cells[i].text);
      }
      have_header = true;
      continue;
    }
    const auto cells = split_line(line, delim);
    if (cells.size() != m.samples() + 1)
      parse_error(matrix_name, line_no, 1,
                  "row has " + std::to_string(cells.size() - 1) + " values, expected " + std::to_string(m.samples()));
    if (cells[0].text.empty()) parse_error(matrix_name, line_no, 1, "empty gene id");
    m.gene_ids.push_back(cells[0].text);
    for (std::size_t i = 1; i < cells.size(); ++i) m.values.push_back(parse_number(cells[i], matrix_name, line_no));
  }
  if (!have_header) throw Error(ErrorCode::parse, matrix_name + ": no header row");
  if (m.genes() == 0) throw Error(ErrorCode::parse, matrix_name + ": no gene rows");

  std::unordered_map<std::string, std::size_t> column_of;
  for (std::size_t s = 0; s < m.samples(); ++s) column_of[m.sample_ids[s]] = s;
  std::vector<std::string> label_of(m.samples());
  std::vector<char> seen(m.samples(), 0);
  m.split.assign(m.samples(), Split::train);
  line_no = 0;
  bool first = true;
  while (std::getline(labels, line)) {
    ++line_no;
    if (blank(line)) continue;
    if (first) delim = detect_delimiter(line);
    const auto cells = split_line(line, delim);
    if (first) {
      first = false;
      if (!column_of.count(cells[0].text)) continue;  // header line
    }
    if (cells.size() < 2 || cells.size() > 3)
      parse_error(labels_name, line_no, 1, "expected sample id, class label and optional split");
    const auto it = column_of.find(cells[0].text);
    if (it == column_of.end())
      parse_error(labels_name, line_no, cells[0].column, "unknown sample id '" + cells[0].text + "'");
    const std::size_t s = it->second;
    if (seen[s]) parse_error(labels_name, line_no, cells[0].column, "duplicate label for '" + cells[0].text + "'");
    seen[s] = 1;
    if (cells[1].text.empty()) parse_error(labels_name, line_no, cells[1].column, "empty class label");
    label_of[s] = cells[1].text;
    if (cells.size() == 3) {
      const std::string tag = lower(cells[2].text);
      if (tag == "train") m.split[s] = Split::train;
      else if (tag == "test") m.split[s] = Split::test;
      else parse_error(labels_name, line_no, cells[2].column, "split must be train or test, got '" + cells[2].text + "'");
    }
  }
  for (std::size_t s = 0; s < m.samples(); ++s)
    if (!seen[s]) throw Error(ErrorCode::parse, labels_name + ": missing label for sample '" + m.sample_ids[s] + "'");

  std::set<std::string> names(label_of.begin(), label_of.end());
  if (names.size() < 2) throw Error(ErrorCode::invalid_argument, labels_name + ": at least two classes are required");
  m.class_labels.assign(names.begin(), names.end());
  std::map<std::string, std::size_t> index;
  for (std::size_t c = 0; c < m.class_labels.size(); ++c) index[m.class_labels[c]] = c;
  for (const auto& l : label_of) m.labels.push_back(index.at(l));
  validate(m);
  return m;
}

ExpressionMatrix load_matrix(const std::string& path, const std::string& labels_path) {
  std::ifstream matrix(path);
  if (!matrix) throw Error(ErrorCode::parse, "cannot open matrix file '" + path + "'");
  std::ifstream labels(labels_path);
  if (!labels) throw Error(ErrorCode::parse, "cannot open labels file '" + labels_path + "'");
  return parse_matrix(matrix, labels, path, labels_path);
}

ExpressionMatrix preprocess(const ExpressionMatrix& matrix, const PreprocessOptions& options) {
  validate(matrix);
  if (options.clamp && !(options.floor > 0.0 && options.floor < options.ceiling))
    throw Error(ErrorCode::invalid_argument, "clamp bounds must satisfy 0 < floor < ceiling");
  ExpressionMatrix out = matrix;
  out.gene_ids.clear();
  out.values.clear();
  const auto train = matrix.columns(Split::train);
  const std::size_t n = matrix.samples();
  std::vector<double> row(n);
  for (std::size_t g = 0; g < matrix.genes(); ++g) {
    for (std::size_t s = 0; s < n; ++s) {
      double v = matrix.value(g, s);
      if (options.clamp) v = std::clamp(v, options.floor, options.ceiling);
      row[s] = v;
    }
    if (options.filter) {
      double lo = row[train[0]];
      double hi = lo;
      for (std::size_t s : train) {
        lo = std::min(lo, row[s]);
        hi = std::max(hi, row[s]);
      }
      const bool flat_fold = lo > 0.0 ? hi / lo <= options.min_fold : false;
      if (flat_fold || hi - lo <= options.min_range) continue;
    }
    if (options.log10) {
      for (double& v : row) {
        if (!(v > 0.0)) throw Error(ErrorCode::range, "log transform needs positive values; enable clamping");
        v = std::log10(v);
      }
    }
    out.gene_ids.push_back(matrix.gene_ids[g]);
    out.values.insert(out.values.end(), row.begin(), row.end());
  }
  if (out.gene_ids.empty()) throw Error(ErrorCode::empty_result, "preprocessing removed every gene");
  return out;
}

}  // namespace mdl
