#include "mdl/features.hpp"

#include <cmath>
#include <string>

#include "mdl/error.hpp"

namespace mdl {

FeatureTable::FeatureTable(std::size_t rows, std::size_t cols, std::vector<double> values, FeatureKind kind)
    : rows_(rows), cols_(cols), values_(std::move(values)), kind_(kind) {
  if (values_.size() != rows_ * cols_)
    throw Error(ErrorCode::invalid_argument, "feature table size does not match rows x cols");
  for (double v : values_)
    if (!std::isfinite(v)) throw Error(ErrorCode::range, "feature values must be finite");
}

FeatureTable FeatureTable::prefix(std::size_t cols) const {
  if (cols > cols_) throw Error(ErrorCode::invalid_argument, "prefix longer than the feature table");
  std::vector<double> v(rows_ * cols);
  for (std::size_t j = 0; j < rows_; ++j)
    for (std::size_t k = 0; k < cols; ++k) v[j * cols + k] = (*this)(j, k);
  return FeatureTable(rows_, cols, std::move(v), kind_);
}

FeatureTable build_moment_features(const Alphabet& alphabet, std::size_t m) {
  const std::size_t K = alphabet.size();
  std::vector<double> v(K * m);
  for (std::size_t j = 0; j < K; ++j) {
    double power = 1.0;
    for (std::size_t k = 0; k < m; ++k) {
      power *= alphabet[j];
      if (!std::isfinite(power))
        throw Error(ErrorCode::range, "moment feature x^" + std::to_string(k + 1) + " overflows for symbol " +
                                          std::to_string(alphabet[j]));
      v[j * m + k] = power;
    }
  }
  return FeatureTable(K, m, std::move(v), FeatureKind::moment);
}

FeatureTable build_indicator_features(std::size_t k) {
  if (k < 2) throw Error(ErrorCode::invalid_argument, "indicator features need at least two symbols");
  std::vector<double> v(k * (k - 1), 0.0);
  for (std::size_t j = 1; j < k; ++j) v[j * (k - 1) + (j - 1)] = 1.0;
  return FeatureTable(k, k - 1, std::move(v));
}

MomentVector empirical_moments(const Sample& sample, const FeatureTable& features) {
  if (sample.alphabet_size() != features.rows())
    throw Error(ErrorCode::invalid_argument, "sample alphabet does not match the feature table");
  const auto counts = sample.counts();
  MomentVector mv{std::vector<double>(features.cols(), 0.0)};
  const double n = static_cast<double>(sample.size());
  for (std::size_t j = 0; j < counts.size(); ++j) {
    if (counts[j] == 0) continue;
    for (std::size_t k = 0; k < features.cols(); ++k) mv.means[k] += static_cast<double>(counts[j]) * features(j, k);
  }
  for (double& m : mv.means) m /= n;
  return mv;
}

}  // namespace mdl
