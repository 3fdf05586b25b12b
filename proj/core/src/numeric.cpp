#include "mdl/numeric.hpp"

#include <algorithm>

#include "mdl/error.hpp"

namespace mdl {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::range: return "range";
    case ErrorCode::infeasible: return "infeasible";
    case ErrorCode::non_convergence: return "non-convergence";
    case ErrorCode::cap_exceeded: return "cap-exceeded";
    case ErrorCode::parse: return "parse";
    case ErrorCode::empty_result: return "empty-result";
  }
  return "unknown";
}

double log_sum_exp(std::span<const double> terms) noexcept {
  LogSumExp acc;
  for (double t : terms) acc.add(t);
  return acc.value();
}

std::vector<double> log_factorial_table(std::size_t n) {
  std::vector<double> t(n + 1, 0.0);
  for (std::size_t k = 2; k <= n; ++k) t[k] = t[k - 1] + std::log(static_cast<double>(k));
  return t;
}

double log_multinomial(std::span<const std::size_t> counts, std::span<const double> log_factorials) {
  std::size_t n = 0;
  double v = 0.0;
  for (std::size_t c : counts) {
    n += c;
    v -= log_factorials[c];
  }
  return v + log_factorials[n];
}

double binomial(std::size_t n, std::size_t k) noexcept {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

double count_compositions(std::size_t total, std::size_t parts) noexcept {
  if (parts == 0) return total == 0 ? 1.0 : 0.0;
  return binomial(total + parts - 1, parts - 1);
}

CompositionRange::CompositionRange(std::size_t total, std::size_t parts) : counts_(parts, 0) {
  if (parts == 0) throw Error(ErrorCode::invalid_argument, "compositions need at least one part");
  counts_.back() = total;
}

bool CompositionRange::next() noexcept {
  // Lexicographic successor: find the rightmost position (excluding the last)
  // that can be incremented while the tail absorbs the remainder.
  const std::size_t k = counts_.size();
  if (k == 1) return false;
  std::size_t tail = counts_.back();
  if (tail == 0) {
    // Move leftwards to the last nonzero before the final slot.
    std::size_t i = k - 1;
    while (i > 0 && counts_[i - 1] == 0) --i;
    if (i == 0) return false;
    // counts_[i-1] > 0 and everything after it is zero; carry one level up.
    std::size_t j = i - 1;
    if (j == 0) return false;
    const std::size_t moved = counts_[j];
    counts_[j] = 0;
    ++counts_[j - 1];
    counts_.back() = moved - 1;
    return true;
  }
  ++counts_[k - 2];
  --counts_.back();
  return true;
}

double entropy_of(std::span<const double> probs) noexcept {
  double h = 0.0;
  for (double p : probs)
    if (p > 0.0) h -= p * std::log(p);
  return std::max(h, 0.0);
}

std::uint64_t fnv1a64(std::span<const unsigned char> bytes) noexcept {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace mdl
