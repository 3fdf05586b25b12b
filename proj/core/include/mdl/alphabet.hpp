#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace mdl {

// Ordered finite set of real symbols. K >= 2, strictly increasing, finite.
class Alphabet {
 public:
  explicit Alphabet(std::vector<double> symbols);

  // Quantization levels 0, 1, ..., k - 1.
  static Alphabet integer_levels(std::size_t k);

  std::size_t size() const noexcept { return symbols_.size(); }
  std::span<const double> symbols() const noexcept { return symbols_; }
  double operator[](std::size_t j) const { return symbols_.at(j); }

  // Index of an exact symbol value, if present.
  std::optional<std::size_t> index_of(double value) const noexcept;

  bool operator==(const Alphabet&) const = default;

 private:
  std::vector<double> symbols_;
};

// A length-n sequence of alphabet indices.
class Sample {
 public:
  Sample(std::vector<std::size_t> indices, std::size_t alphabet_size);

  std::size_t size() const noexcept { return indices_.size(); }
  std::size_t alphabet_size() const noexcept { return alphabet_size_; }
  std::span<const std::size_t> indices() const noexcept { return indices_; }
  std::size_t operator[](std::size_t i) const { return indices_.at(i); }

  // Histogram over the alphabet (the type of the sequence).
  std::vector<std::size_t> counts() const;

 private:
  std::vector<std::size_t> indices_;
  std::size_t alphabet_size_;
};

}  // namespace mdl
