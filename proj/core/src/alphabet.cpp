#include "mdl/alphabet.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mdl/error.hpp"

namespace mdl {

Alphabet::Alphabet(std::vector<double> symbols) : symbols_(std::move(symbols)) {
  if (symbols_.size() < 2) throw Error(ErrorCode::invalid_argument, "alphabet needs at least two symbols");
  for (std::size_t j = 0; j < symbols_.size(); ++j) {
    if (!std::isfinite(symbols_[j])) throw Error(ErrorCode::invalid_argument, "alphabet symbols must be finite");
    if (j > 0 && !(symbols_[j] > symbols_[j - 1]))
      throw Error(ErrorCode::invalid_argument, "alphabet symbols must be strictly increasing");
  }
}

Alphabet Alphabet::integer_levels(std::size_t k) {
  std::vector<double> s(k);
  for (std::size_t j = 0; j < k; ++j) s[j] = static_cast<double>(j);
  return Alphabet(std::move(s));
}

std::optional<std::size_t> Alphabet::index_of(double value) const noexcept {
  const auto it = std::lower_bound(symbols_.begin(), symbols_.end(), value);
  if (it == symbols_.end() || *it != value) return std::nullopt;
  return static_cast<std::size_t>(it - symbols_.begin());
}

Sample::Sample(std::vector<std::size_t> indices, std::size_t alphabet_size)
    : indices_(std::move(indices)), alphabet_size_(alphabet_size) {
  if (indices_.empty()) throw Error(ErrorCode::invalid_argument, "sample must contain at least one point");
  for (std::size_t i = 0; i < indices_.size(); ++i)
    if (indices_[i] >= alphabet_size_)
      throw Error(ErrorCode::invalid_argument,
                  "sample index " + std::to_string(indices_[i]) + " at position " + std::to_string(i) +
                      " is outside the alphabet of size " + std::to_string(alphabet_size_));
}

std::vector<std::size_t> Sample::counts() const {
  std::vector<std::size_t> c(alphabet_size_, 0);
  for (std::size_t j : indices_) ++c[j];
  return c;
}

}  // namespace mdl
