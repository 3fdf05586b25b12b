#include "mdl/pipeline/quantize.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mdl/error.hpp"

namespace mdl {

const char* to_string(QuantizeMethod method) noexcept {
  return method == QuantizeMethod::quantile ? "quantile" : "equal-width";
}

std::optional<QuantizeMethod> parse_quantize_method(std::string_view name) noexcept {
  if (name == "quantile" || name == "equal-frequency") return QuantizeMethod::quantile;
  if (name == "equal-width" || name == "width") return QuantizeMethod::equal_width;
  return std::nullopt;
}

std::size_t Quantizer::level_of(double x) const noexcept {
  return static_cast<std::size_t>(std::lower_bound(cuts.begin(), cuts.end(), x) - cuts.begin());
}

Quantizer fit_quantizer(std::span<const double> values, std::size_t levels, QuantizeMethod method) {
  if (levels < 2) throw Error(ErrorCode::invalid_argument, "quantization needs at least two levels");
  if (values.empty()) throw Error(ErrorCode::invalid_argument, "cannot quantize an empty value list");
  for (double v : values)
    if (!std::isfinite(v)) throw Error(ErrorCode::range, "quantization values must be finite");
  const std::size_t n = values.size();
  if (method == QuantizeMethod::quantile && n < levels)
    throw Error(ErrorCode::invalid_argument, "quantile binning into " + std::to_string(levels) + " levels needs at least " +
                                                 std::to_string(levels) + " values");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  Quantizer q;
  q.levels = levels;
  q.constant = sorted.front() == sorted.back();
  q.cuts.resize(levels - 1);
  if (q.constant) {
    std::fill(q.cuts.begin(), q.cuts.end(), sorted.front());
    return q;
  }
  for (std::size_t i = 1; i < levels; ++i) {
    if (method == QuantizeMethod::quantile) {
      const std::size_t r = i * n / levels;
      q.cuts[i - 1] = 0.5 * (sorted[r - 1] + sorted[r]);
    } else {
      const double lo = sorted.front();
      const double hi = sorted.back();
      q.cuts[i - 1] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(levels);
    }
  }
  return q;
}

QuantizedGene quantize(std::span<const double> values, std::size_t levels, QuantizeMethod method) {
  QuantizedGene g;
  g.quantizer = fit_quantizer(values, levels, method);
  g.levels.reserve(values.size());
  for (double v : values) g.levels.push_back(g.quantizer.level_of(v));
  return g;
}

Sample QuantizedMatrix::sample(std::size_t g, std::span<const std::size_t> columns) const {
  std::vector<std::size_t> idx;
  idx.reserve(columns.size());
  for (std::size_t s : columns) idx.push_back(level(g, s));
  return Sample(std::move(idx), levels);
}

QuantizedMatrix quantize_matrix(const ExpressionMatrix& matrix, std::size_t levels, QuantizeMethod method) {
  validate(matrix);
  const auto train = matrix.columns(Split::train);
  QuantizedMatrix q;
  q.levels = levels;
  q.genes = matrix.genes();
  q.samples = matrix.samples();
  q.data.resize(q.genes * q.samples);
  q.quantizers.reserve(q.genes);
  std::vector<double> fit_values(train.size());
  for (std::size_t g = 0; g < q.genes; ++g) {
    for (std::size_t i = 0; i < train.size(); ++i) fit_values[i] = matrix.value(g, train[i]);
    q.quantizers.push_back(fit_quantizer(fit_values, levels, method));
    for (std::size_t s = 0; s < q.samples; ++s) q.data[g * q.samples + s] = q.quantizers.back().level_of(matrix.value(g, s));
  }
  return q;
}

}  // namespace mdl
