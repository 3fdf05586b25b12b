#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mdl/dual_solver.hpp"
#include "mdl/pipeline/gene_selection.hpp"
#include "mdl/pipeline/quantize.hpp"

namespace mdl {

// Per-class maximum-entropy distributions over one gene's levels.
struct GeneModel {
  std::size_t gene_index = 0;
  std::string gene_id;
  std::size_t m = 0;
  std::vector<double> log_probs;  // classes x levels

  double log_prob(std::size_t c, std::size_t level, std::size_t levels) const {
    return log_probs[c * levels + level];
  }
};

// Naive-Bayes combination of per-gene, per-class maxent models.
struct MaxEntClassifier {
  std::size_t classes = 0;
  std::size_t levels = 0;
  std::vector<double> priors;
  std::vector<GeneModel> genes;
};

struct ClassifierOptions {
  double epsilon = 1e-6;  // probability floor before renormalizing
  // Overrides every gene's chosen m (the fixed-moment baselines).
  std::optional<std::size_t> fixed_m;
  SolverOptions solver{};
};

// Fits the top_g ranked genes on the given (train) columns.
MaxEntClassifier build_classifier(const QuantizedMatrix& matrix, std::span<const std::size_t> columns,
                                  std::span<const std::size_t> labels, std::size_t classes,
                                  std::span<const GeneSelection> ranked, std::size_t top_g,
                                  const ClassifierOptions& options = {});

struct Prediction {
  std::size_t label = 0;
  std::vector<double> log_scores;  // ln prior_c + sum_g ln p_g(x_g | c)
};

// `levels[i]` is the level of classifier gene i. Ties go to the lower class.
Prediction predict(const MaxEntClassifier& classifier, std::span<const std::size_t> levels);

// Prediction for one column of the quantized matrix.
Prediction predict_column(const MaxEntClassifier& classifier, const QuantizedMatrix& matrix, std::size_t column);

struct Evaluation {
  std::size_t total = 0;
  std::size_t correct = 0;
  double accuracy = 0.0;
  std::vector<std::size_t> confusion;  // classes x classes, row = true label
};

Evaluation evaluate(const MaxEntClassifier& classifier, const QuantizedMatrix& matrix,
                    std::span<const std::size_t> columns, std::span<const std::size_t> labels);

}  // namespace mdl
