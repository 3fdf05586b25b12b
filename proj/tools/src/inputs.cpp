#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "internal.hpp"
#include "mdl/error.hpp"

namespace mdl::cli {

namespace {

double to_real(std::string_view s, const std::string& what) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size())
    throw Error(ErrorCode::parse, what + ": '" + std::string(s) + "' is not a number");
  return v;
}

std::size_t to_count(std::string_view s, const std::string& what) {
  std::size_t v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size() || s.empty())
    throw Error(ErrorCode::parse, what + ": '" + std::string(s) + "' is not a non-negative integer");
  return v;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : text) {
    if (ch == ',') {
      parts.push_back(cur);
      cur.clear();
    } else if (ch != ' ') {
      cur += ch;
    }
  }
  parts.push_back(cur);
  return parts;
}

}  // namespace

InputFile read_input(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::parse, "cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return {path, ss.str()};
}

std::vector<std::string> tokens(const InputFile& file) {
  std::vector<std::string> out;
  std::istringstream in(file.bytes);
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream words(line);
    std::string w;
    while (words >> w) out.push_back(w);
  }
  return out;
}

std::vector<double> numbers(const InputFile& file) {
  std::vector<double> out;
  for (const auto& t : tokens(file)) out.push_back(to_real(t, file.path));
  return out;
}

std::vector<std::size_t> parse_counts(const std::string& text, const std::string& what) {
  std::vector<std::size_t> out;
  for (const auto& part : split_list(text)) {
    if (const auto dots = part.find(".."); dots != std::string::npos) {
      const auto lo = to_count(std::string_view(part).substr(0, dots), what);
      const auto hi = to_count(std::string_view(part).substr(dots + 2), what);
      if (hi < lo) throw Error(ErrorCode::parse, what + ": empty range '" + part + "'");
      for (std::size_t v = lo; v <= hi; ++v) out.push_back(v);
    } else {
      out.push_back(to_count(part, what));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<double> parse_reals(const std::string& text, const std::string& what) {
  std::vector<double> out;
  for (const auto& part : split_list(text)) out.push_back(to_real(part, what));
  return out;
}

Alphabet make_alphabet(const std::string& list, const std::vector<double>& values) {
  if (!list.empty()) return Alphabet(parse_reals(list, "--alphabet"));
  std::vector<double> distinct = values;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 2)
    throw Error(ErrorCode::invalid_argument, "the sample has fewer than two distinct values; pass --alphabet");
  return Alphabet(std::move(distinct));
}

Sample to_sample(const Alphabet& alphabet, const std::vector<double>& values, const std::string& what) {
  std::vector<std::size_t> idx;
  idx.reserve(values.size());
  for (double v : values) {
    const auto j = alphabet.index_of(v);
    if (!j) throw Error(ErrorCode::invalid_argument, what + ": value " + general(v) + " is not in the alphabet");
    idx.push_back(*j);
  }
  return Sample(std::move(idx), alphabet.size());
}

}  // namespace mdl::cli
