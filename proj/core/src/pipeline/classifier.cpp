#include "mdl/pipeline/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mdl/error.hpp"
#include "mdl/maxent.hpp"

namespace mdl {

MaxEntClassifier build_classifier(const QuantizedMatrix& matrix, std::span<const std::size_t> columns,
                                  std::span<const std::size_t> labels, std::size_t classes,
                                  std::span<const GeneSelection> ranked, std::size_t top_g,
                                  const ClassifierOptions& options) {
  if (top_g == 0) throw Error(ErrorCode::invalid_argument, "the classifier needs at least one gene");
  if (labels.size() != columns.size())
    throw Error(ErrorCode::invalid_argument, "label count does not match the selected columns");
  if (!(options.epsilon > 0.0 && options.epsilon < 1.0))
    throw Error(ErrorCode::invalid_argument, "probability floor must lie in (0, 1)");
  const std::size_t K = matrix.levels;
  std::vector<std::vector<std::size_t>> by_class(classes);
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (labels[i] >= classes) throw Error(ErrorCode::invalid_argument, "label out of range");
    by_class[labels[i]].push_back(columns[i]);
  }
  for (std::size_t c = 0; c < classes; ++c)
    if (by_class[c].empty())
      throw Error(ErrorCode::invalid_argument, "class " + std::to_string(c) + " has no training columns");

  MaxEntClassifier clf;
  clf.classes = classes;
  clf.levels = K;
  for (std::size_t c = 0; c < classes; ++c)
    clf.priors.push_back(static_cast<double>(by_class[c].size()) / static_cast<double>(columns.size()));

  const Alphabet alphabet = Alphabet::integer_levels(K);
  std::size_t used = 0;
  for (const auto& sel : ranked) {
    if (used == top_g) break;
    if (!sel.chosen_m && !options.fixed_m) continue;
    GeneModel gm;
    gm.gene_index = sel.gene_index;
    gm.gene_id = sel.gene_id;
    gm.m = options.fixed_m ? *options.fixed_m : *sel.chosen_m;
    const FeatureTable features = build_moment_features(alphabet, gm.m);
    gm.log_probs.resize(classes * K);
    for (std::size_t c = 0; c < classes; ++c) {
      const Sample x = matrix.sample(sel.gene_index, by_class[c]);
      const auto dist = fit_maxent(features, empirical_moments(x, features), options.solver);
      double total = 0.0;
      for (std::size_t j = 0; j < K; ++j) total += std::max(dist.probs[j], options.epsilon);
      for (std::size_t j = 0; j < K; ++j)
        gm.log_probs[c * K + j] = std::log(std::max(dist.probs[j], options.epsilon) / total);
    }
    clf.genes.push_back(std::move(gm));
    ++used;
  }
  if (clf.genes.empty()) throw Error(ErrorCode::empty_result, "no ranked gene could be used by the classifier");
  return clf;
}

Prediction predict(const MaxEntClassifier& clf, std::span<const std::size_t> levels) {
  if (levels.size() != clf.genes.size())
    throw Error(ErrorCode::invalid_argument, "level vector does not match the classifier genes");
  Prediction p;
  p.log_scores.resize(clf.classes);
  for (std::size_t c = 0; c < clf.classes; ++c) {
    double s = std::log(clf.priors[c]);
    for (std::size_t i = 0; i < levels.size(); ++i) {
      if (levels[i] >= clf.levels) throw Error(ErrorCode::invalid_argument, "level out of range");
      s += clf.genes[i].log_prob(c, levels[i], clf.levels);
    }
    p.log_scores[c] = s;
  }
  for (std::size_t c = 1; c < clf.classes; ++c)
    if (p.log_scores[c] > p.log_scores[p.label]) p.label = c;
  return p;
}

Prediction predict_column(const MaxEntClassifier& clf, const QuantizedMatrix& matrix, std::size_t column) {
  std::vector<std::size_t> levels;
  levels.reserve(clf.genes.size());
  for (const auto& g : clf.genes) levels.push_back(matrix.level(g.gene_index, column));
  return predict(clf, levels);
}

Evaluation evaluate(const MaxEntClassifier& clf, const QuantizedMatrix& matrix, std::span<const std::size_t> columns,
                    std::span<const std::size_t> labels) {
  if (labels.size() != columns.size())
    throw Error(ErrorCode::invalid_argument, "label count does not match the selected columns");
  Evaluation e;
  e.confusion.assign(clf.classes * clf.classes, 0);
  for (std::size_t i = 0; i < columns.size(); ++i) {
    const std::size_t pred = predict_column(clf, matrix, columns[i]).label;
    ++e.confusion[labels[i] * clf.classes + pred];
    if (pred == labels[i]) ++e.correct;
    ++e.total;
  }
  e.accuracy = e.total ? static_cast<double>(e.correct) / static_cast<double>(e.total) : 0.0;
  return e;
}

}  // namespace mdl
