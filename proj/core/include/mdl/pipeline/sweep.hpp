#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "mdl/pipeline/classifier.hpp"
#include "mdl/pipeline/expression.hpp"
#include "mdl/pipeline/gene_selection.hpp"
#include "mdl/pipeline/quantize.hpp"

namespace mdl {

struct ExperimentConfig {
  QuantizeMethod quantize = QuantizeMethod::quantile;
  GeneSelectionConfig selection{};
  ClassifierOptions classifier{};
  std::size_t workers = 1;
  // Complexity values depend only on level counts and the selection config,
  // so one memo may serve many runs that share the config.
  std::shared_ptr<ComplexityMemo> memo;
};

// Columns and labels the experiments train and score on. Scoring uses the
// test split, or the train split when there is no test column.
struct Partition {
  std::vector<std::size_t> train;
  std::vector<std::size_t> train_labels;
  std::vector<std::size_t> eval;
  std::vector<std::size_t> eval_labels;
  bool eval_is_test = false;
};

Partition partition(const ExpressionMatrix& matrix);

struct SweepRow {
  std::size_t levels = 0;
  double mean_nml_nats = 0.0;  // over the top genes of this level count
  double accuracy = 0.0;
  std::size_t correct = 0;
  std::size_t total = 0;
  std::vector<std::string> top_genes;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::size_t top_g = 0;
  std::size_t nml_argmin_levels = 0;              // smallest on ties
  std::vector<std::size_t> accuracy_argmax_levels;  // every level count at the maximum
  // The NML minimum falls on a level count of maximal accuracy.
  bool co_extremum = false;
};

// For every level count: quantize on train columns, rank genes afresh, and
// score the classifier on the top_g genes.
SweepResult run_quantization_sweep(const ExpressionMatrix& matrix, const std::vector<std::size_t>& levels,
                                   std::size_t top_g, const ExperimentConfig& config);

struct CurveRow {
  std::size_t genes = 0;
  double nml_accuracy = 0.0;
  std::vector<double> fixed_accuracy;  // one per fixed m, in order
};

struct ClassifierCurve {
  std::size_t levels = 0;
  std::vector<std::size_t> fixed_m;
  std::vector<CurveRow> rows;
};

// Accuracy against the number of top-ranked genes, for moment counts fixed
// per gene by NML and for each fixed m. Every classifier uses the NML ranking.
ClassifierCurve run_classifier_curve(const ExpressionMatrix& matrix, std::size_t levels, std::size_t max_genes,
                                     const std::vector<std::size_t>& fixed_m, const ExperimentConfig& config);

}  // namespace mdl
