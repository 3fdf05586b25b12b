#include "mdl/pipeline/sweep.hpp"

#include <algorithm>
#include <limits>

#include "mdl/error.hpp"

namespace mdl {

Partition partition(const ExpressionMatrix& matrix) {
  validate(matrix);
  Partition p;
  p.train = matrix.columns(Split::train);
  for (std::size_t s : p.train) p.train_labels.push_back(matrix.labels[s]);
  p.eval = matrix.columns(Split::test);
  p.eval_is_test = !p.eval.empty();
  if (!p.eval_is_test) p.eval = p.train;
  for (std::size_t s : p.eval) p.eval_labels.push_back(matrix.labels[s]);
  return p;
}

SweepResult run_quantization_sweep(const ExpressionMatrix& matrix, const std::vector<std::size_t>& levels,
                                   std::size_t top_g, const ExperimentConfig& config) {
  if (levels.empty()) throw Error(ErrorCode::invalid_argument, "no level counts to sweep");
  if (top_g == 0) throw Error(ErrorCode::invalid_argument, "top_g must be at least one");
  const Partition p = partition(matrix);
  SweepResult result;
  result.top_g = top_g;
  for (std::size_t K : levels) {
    const QuantizedMatrix q = quantize_matrix(matrix, K, config.quantize);
    const auto ranked = rank_genes(q, matrix.gene_ids, p.train, p.train_labels, matrix.classes(), config.selection,
                                   config.workers, config.memo.get());
    SweepRow row;
    row.levels = K;
    const std::size_t g = std::min(top_g, ranked.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < g; ++i) {
      sum += ranked[i].min_nml_nats;
      row.top_genes.push_back(ranked[i].gene_id);
    }
    row.mean_nml_nats = sum / static_cast<double>(g);
    const auto clf = build_classifier(q, p.train, p.train_labels, matrix.classes(), ranked, g, config.classifier);
    const auto eval = evaluate(clf, q, p.eval, p.eval_labels);
    row.accuracy = eval.accuracy;
    row.correct = eval.correct;
    row.total = eval.total;
    result.rows.push_back(std::move(row));
  }
  double best_nml = std::numeric_limits<double>::infinity();
  std::size_t best_correct = 0;
  for (const auto& r : result.rows) {
    if (r.mean_nml_nats < best_nml - 1e-9) {
      best_nml = r.mean_nml_nats;
      result.nml_argmin_levels = r.levels;
    }
    best_correct = std::max(best_correct, r.correct);
  }
  for (const auto& r : result.rows)
    if (r.correct == best_correct) result.accuracy_argmax_levels.push_back(r.levels);
  result.co_extremum = std::find(result.accuracy_argmax_levels.begin(), result.accuracy_argmax_levels.end(),
                                 result.nml_argmin_levels) != result.accuracy_argmax_levels.end();
  return result;
}

ClassifierCurve run_classifier_curve(const ExpressionMatrix& matrix, std::size_t levels, std::size_t max_genes,
                                     const std::vector<std::size_t>& fixed_m, const ExperimentConfig& config) {
  if (max_genes == 0) throw Error(ErrorCode::invalid_argument, "max_genes must be at least one");
  const Partition p = partition(matrix);
  const QuantizedMatrix q = quantize_matrix(matrix, levels, config.quantize);
  const auto ranked = rank_genes(q, matrix.gene_ids, p.train, p.train_labels, matrix.classes(), config.selection,
                                 config.workers, config.memo.get());
  const std::size_t G = std::min(max_genes, ranked.size());

  std::vector<MaxEntClassifier> full;
  full.push_back(build_classifier(q, p.train, p.train_labels, matrix.classes(), ranked, G, config.classifier));
  for (std::size_t m : fixed_m) {
    ClassifierOptions o = config.classifier;
    o.fixed_m = m;
    full.push_back(build_classifier(q, p.train, p.train_labels, matrix.classes(), ranked, G, o));
  }

  ClassifierCurve curve;
  curve.levels = levels;
  curve.fixed_m = fixed_m;
  const std::size_t usable = full.front().genes.size();
  for (std::size_t g = 1; g <= usable; ++g) {
    CurveRow row;
    row.genes = g;
    for (std::size_t k = 0; k < full.size(); ++k) {
      MaxEntClassifier prefix = full[k];
      prefix.genes.resize(std::min(g, prefix.genes.size()));
      const double acc = evaluate(prefix, q, p.eval, p.eval_labels).accuracy;
      if (k == 0) row.nml_accuracy = acc;
      else row.fixed_accuracy.push_back(acc);
    }
    curve.rows.push_back(std::move(row));
  }
  return curve;
}

}  // namespace mdl
