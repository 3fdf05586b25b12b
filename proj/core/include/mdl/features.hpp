#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mdl/alphabet.hpp"

namespace mdl {

enum class FeatureKind { moment, custom };

// K x m matrix of feature values phi_k(x_j), stored row-major.
// m = 0 is the unconstrained model.
class FeatureTable {
 public:
  FeatureTable(std::size_t rows, std::size_t cols, std::vector<double> values,
               FeatureKind kind = FeatureKind::custom);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  FeatureKind kind() const noexcept { return kind_; }

  double operator()(std::size_t j, std::size_t k) const noexcept { return values_[j * cols_ + k]; }
  std::span<const double> row(std::size_t j) const noexcept {
    return std::span<const double>(values_).subspan(j * cols_, cols_);
  }
  std::span<const double> values() const noexcept { return values_; }

  // Table made of the first `cols` columns.
  FeatureTable prefix(std::size_t cols) const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> values_;
  FeatureKind kind_;
};

// Moment features phi_k(x) = x^k, k = 1..m. Throws ErrorCode::range when a
// power is not representable.
FeatureTable build_moment_features(const Alphabet& alphabet, std::size_t m);

// K - 1 indicator columns [x = x_j], j = 1..K-1; these span the simplex.
FeatureTable build_indicator_features(std::size_t k);

struct MomentVector {
  std::vector<double> means;
};

MomentVector empirical_moments(const Sample& sample, const FeatureTable& features);

}  // namespace mdl
