#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mdl/alphabet.hpp"
#include "mdl/pipeline/expression.hpp"

namespace mdl {

enum class QuantizeMethod { quantile, equal_width };

const char* to_string(QuantizeMethod method) noexcept;
std::optional<QuantizeMethod> parse_quantize_method(std::string_view name) noexcept;

// K - 1 non-decreasing cut points; x maps to the number of cuts below it.
struct Quantizer {
  std::size_t levels = 0;
  std::vector<double> cuts;
  bool constant = false;  // the fitting values were all equal

  std::size_t level_of(double x) const noexcept;
};

// Equal-frequency cuts sit halfway between the order statistics at
// ranks floor(i n / K) - 1 and floor(i n / K); equal-width cuts split
// [min, max] evenly. Quantile needs n >= K.
Quantizer fit_quantizer(std::span<const double> values, std::size_t levels, QuantizeMethod method);

struct QuantizedGene {
  std::vector<std::size_t> levels;
  Quantizer quantizer;
};

// Fits on all values and maps them.
QuantizedGene quantize(std::span<const double> values, std::size_t levels, QuantizeMethod method);

// Level indices for every gene and sample, with cut points fitted on the
// train columns only.
struct QuantizedMatrix {
  std::size_t levels = 0;
  std::size_t genes = 0;
  std::size_t samples = 0;
  std::vector<std::size_t> data;  // gene-major
  std::vector<Quantizer> quantizers;

  std::size_t level(std::size_t g, std::size_t s) const { return data[g * samples + s]; }
  std::span<const std::size_t> row(std::size_t g) const {
    return std::span<const std::size_t>(data).subspan(g * samples, samples);
  }
  // The gene's levels at the given columns, as a sample over {0..K-1}.
  Sample sample(std::size_t g, std::span<const std::size_t> columns) const;
};

QuantizedMatrix quantize_matrix(const ExpressionMatrix& matrix, std::size_t levels, QuantizeMethod method);

}  // namespace mdl
