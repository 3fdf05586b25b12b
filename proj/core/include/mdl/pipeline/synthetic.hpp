#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mdl/pipeline/expression.hpp"

namespace mdl {

// Two-class expression data on the raw intensity scale.
//
// An informative gene has a latent state s in {0, .., states-1}, expressed as
// log10 intensity center + spacing * (s - (states-1)/2) plus Gaussian jitter.
// Train states are allocated exactly so that the pool is equally frequent
// over states. The minority class takes its share with weights
// exp(-concentration d^2) in the scaled distance d from the middle state and
// the majority class holds the rest, so the class signal is not monotone in
// the expression value. Test states are drawn from the same class profiles.
// A noise gene is Gaussian on the log scale with the same law in both
// classes.
struct SyntheticConfig {
  std::size_t informative = 30;
  std::size_t noise = 70;
  std::vector<std::size_t> train_per_class{27, 11};
  std::vector<std::size_t> test_per_class{20, 14};
  std::size_t states = 5;
  double spacing = 0.35;
  double jitter = 0.04;
  double concentration = 3.0;
  double noise_sd = 0.3;
  std::uint64_t seed = 1;
};

struct SyntheticData {
  ExpressionMatrix matrix;
  std::vector<char> informative;  // per gene
};

// Class labels are "c0" and "c1"; informative genes are listed first with ids
// inf0000.., noise genes follow as noise0000... Deterministic in the seed.
SyntheticData make_synthetic(const SyntheticConfig& config);

}  // namespace mdl
