#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace mdl {

// Streaming log-sum-exp. Terms are folded in the order they are added, so two
// accumulators fed the same sequence produce bit-identical results.
class LogSumExp {
 public:
  void add(double log_term) noexcept {
    if (log_term == -std::numeric_limits<double>::infinity()) return;
    if (log_term > max_) {
      sum_ = sum_ * std::exp(max_ - log_term) + 1.0;
      max_ = log_term;
    } else {
      sum_ += std::exp(log_term - max_);
    }
  }

  void merge(const LogSumExp& other) noexcept {
    if (other.empty()) return;
    if (empty()) {
      *this = other;
      return;
    }
    if (other.max_ > max_) {
      sum_ = sum_ * std::exp(max_ - other.max_) + other.sum_;
      max_ = other.max_;
    } else {
      sum_ += other.sum_ * std::exp(other.max_ - max_);
    }
  }

  bool empty() const noexcept { return max_ == -std::numeric_limits<double>::infinity(); }

  double value() const noexcept {
    if (empty()) return -std::numeric_limits<double>::infinity();
    return max_ + std::log(sum_);
  }

 private:
  double max_ = -std::numeric_limits<double>::infinity();
  double sum_ = 0.0;
};

double log_sum_exp(std::span<const double> terms) noexcept;

// ln(k!) for k = 0..n, built by summing logs so that differences of entries
// are exact up to rounding of the individual terms.
std::vector<double> log_factorial_table(std::size_t n);

// ln(n! / prod_j counts_j!) using a table from log_factorial_table.
double log_multinomial(std::span<const std::size_t> counts, std::span<const double> log_factorials);

// Binomial coefficient as a double; used only for size caps.
double binomial(std::size_t n, std::size_t k) noexcept;

// Number of length-parts compositions of total, i.e. C(total + parts - 1, parts - 1).
double count_compositions(std::size_t total, std::size_t parts) noexcept;

// Lexicographic enumeration of compositions of `total` into `parts` slots.
// The first composition is (0, ..., 0, total) and the last (total, 0, ..., 0).
class CompositionRange {
 public:
  CompositionRange(std::size_t total, std::size_t parts);

  const std::vector<std::size_t>& current() const noexcept { return counts_; }
  bool next() noexcept;

 private:
  std::vector<std::size_t> counts_;
};

// Entropy of a probability vector in nats, with 0 ln 0 = 0.
double entropy_of(std::span<const double> probs) noexcept;

// FNV-1a 64-bit digest, used to fingerprint input files in reports.
std::uint64_t fnv1a64(std::span<const unsigned char> bytes) noexcept;

}  // namespace mdl
