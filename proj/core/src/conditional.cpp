#include "mdl/conditional.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <string>

#include "mdl/error.hpp"
#include "mdl/fit_cache.hpp"
#include "mdl/numeric.hpp"

namespace mdl {

ClassSet::ClassSet(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.size() < 2) throw Error(ErrorCode::invalid_argument, "a class set needs at least two labels");
  std::set<std::string> seen;
  for (const auto& l : labels_)
    if (!seen.insert(l).second) throw Error(ErrorCode::invalid_argument, "duplicate class label '" + l + "'");
}

ClassSet ClassSet::numbered(std::size_t count) {
  std::vector<std::string> l;
  for (std::size_t c = 0; c < count; ++c) l.push_back(std::to_string(c));
  return ClassSet(std::move(l));
}

std::optional<std::size_t> ClassSet::index_of(const std::string& label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels_.begin());
}

CondFeatureTable::CondFeatureTable(std::size_t levels, std::size_t classes, std::size_t features,
                                   std::vector<double> values)
    : levels_(levels), classes_(classes), features_(features), values_(std::move(values)) {
  if (classes_ < 2) throw Error(ErrorCode::invalid_argument, "conditional features need at least two classes");
  if (features_ == 0) throw Error(ErrorCode::invalid_argument, "conditional feature table needs at least one feature");
  if (values_.size() != levels_ * classes_ * features_)
    throw Error(ErrorCode::invalid_argument, "conditional feature table size mismatch");
  for (double v : values_)
    if (!std::isfinite(v)) throw Error(ErrorCode::range, "feature values must be finite");
}

CondFeatureTable build_cond_moment_features(const Alphabet& alphabet, const ClassSet& classes, std::size_t m,
                                            bool intercept) {
  const std::size_t K = alphabet.size();
  const std::size_t C = classes.size();
  const std::size_t first = intercept ? 0 : 1;
  const std::size_t per_class = m + 1 - first;
  const std::size_t F = per_class * (C - 1);
  std::vector<double> v(K * C * F, 0.0);
  for (std::size_t j = 0; j < K; ++j) {
    std::vector<double> powers(per_class);
    double p = 1.0;
    for (std::size_t k = 0; k <= m; ++k) {
      if (k >= first) powers[k - first] = p;
      p *= alphabet[j];
      if (!std::isfinite(p) && k < m) throw Error(ErrorCode::range, "moment feature overflows");
    }
    for (std::size_t c = 1; c < C; ++c)
      for (std::size_t k = 0; k < per_class; ++k) v[(j * C + c) * F + (c - 1) * per_class + k] = powers[k];
  }
  return CondFeatureTable(K, C, F, std::move(v));
}

namespace {

struct Layout {
  std::vector<std::size_t> levels;      // observed levels, increasing
  std::vector<std::size_t> block_of;    // level -> block index or npos
  std::vector<std::size_t> level_counts;
};

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

Layout layout_of(const CondFeatureTable& features, const Sample& x_sample) {
  if (x_sample.alphabet_size() != features.levels())
    throw Error(ErrorCode::invalid_argument, "x sample alphabet does not match the conditional feature table");
  Layout l;
  const auto counts = x_sample.counts();
  l.block_of.assign(features.levels(), kNone);
  for (std::size_t j = 0; j < counts.size(); ++j) {
    if (counts[j] == 0) continue;
    l.block_of[j] = l.levels.size();
    l.levels.push_back(j);
    l.level_counts.push_back(counts[j]);
  }
  return l;
}

void check_labels(const CondFeatureTable& features, const Sample& x_sample, std::span<const std::size_t> labels) {
  if (labels.size() != x_sample.size())
    throw Error(ErrorCode::invalid_argument, "label count does not match the x sample length");
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] >= features.classes())
      throw Error(ErrorCode::invalid_argument, "label at position " + std::to_string(i) + " is not a valid class");
}

}  // namespace

LogLinearFamily make_conditional_family(const CondFeatureTable& features, const Sample& x_sample) {
  const Layout l = layout_of(features, x_sample);
  const std::size_t C = features.classes();
  const std::size_t F = features.features();
  std::vector<double> values;
  values.reserve(l.levels.size() * C * F);
  std::vector<OutcomeBlock> blocks;
  for (std::size_t b = 0; b < l.levels.size(); ++b) {
    for (std::size_t c = 0; c < C; ++c) {
      const auto row = features.row(l.levels[b], c);
      values.insert(values.end(), row.begin(), row.end());
    }
    blocks.push_back({b * C, (b + 1) * C, static_cast<double>(l.level_counts[b])});
  }
  return LogLinearFamily(std::move(values), F, std::move(blocks));
}

std::vector<double> conditional_counts(const CondFeatureTable& features, const Sample& x_sample,
                                       std::span<const std::size_t> labels) {
  check_labels(features, x_sample, labels);
  const Layout l = layout_of(features, x_sample);
  const std::size_t C = features.classes();
  std::vector<double> counts(l.levels.size() * C, 0.0);
  for (std::size_t i = 0; i < labels.size(); ++i) counts[l.block_of[x_sample[i]] * C + labels[i]] += 1.0;
  return counts;
}

ConditionalModel fit_conditional(const CondFeatureTable& features, const Sample& x_sample,
                                 std::span<const std::size_t> labels, const SolverOptions& options) {
  const auto counts = conditional_counts(features, x_sample, labels);
  const Layout l = layout_of(features, x_sample);
  const auto family = make_conditional_family(features, x_sample);
  DualSolver solver(family, options);
  const DualFit fit = solver.fit_counts(counts);

  const std::size_t K = features.levels();
  const std::size_t C = features.classes();
  const std::size_t F = features.features();
  ConditionalModel model;
  model.levels = K;
  model.classes = C;
  model.lambdas = fit.lambdas;
  model.cond_probs.assign(K * C, 0.0);
  std::vector<double> logits(C);
  for (std::size_t j = 0; j < K; ++j) {
    if (l.block_of[j] != kNone) {
      for (std::size_t c = 0; c < C; ++c) model.cond_probs[j * C + c] = fit.probs[l.block_of[j] * C + c];
      continue;
    }
    for (std::size_t c = 0; c < C; ++c) {
      logits[c] = 0.0;
      for (std::size_t k = 0; k < F; ++k) logits[c] -= fit.lambdas[k] * features(j, c, k);
    }
    const double lz = log_sum_exp(logits);
    for (std::size_t c = 0; c < C; ++c) model.cond_probs[j * C + c] = std::exp(logits[c] - lz);
  }
  model.err_nats = fit.weighted_entropy;
  model.cond_entropy_nats = fit.weighted_entropy / static_cast<double>(x_sample.size());
  model.reduced_support = fit.reduced_support;
  model.max_residual = fit.max_residual;
  model.iterations = fit.iterations;
  return model;
}

double cond_err_codelength(const CondFeatureTable& features, const Sample& x_sample,
                           std::span<const std::size_t> labels, const SolverOptions& options) {
  const auto counts = conditional_counts(features, x_sample, labels);
  const auto family = make_conditional_family(features, x_sample);
  DualSolver solver(family, options);
  return solver.min_weighted_entropy(counts);
}

double cond_comp_exact(const CondFeatureTable& features, const Sample& x_sample, const CompOptions& options) {
  const std::size_t n = x_sample.size();
  const std::size_t C = features.classes();
  const double sequences = std::pow(static_cast<double>(C), static_cast<double>(n));
  if (sequences > static_cast<double>(options.enum_cap))
    throw Error(ErrorCode::cap_exceeded, "exact enumeration over " + std::to_string(C) + "^" + std::to_string(n) +
                                             " label sequences exceeds the cap of " +
                                             std::to_string(options.enum_cap));
  const Layout l = layout_of(features, x_sample);
  const auto family = make_conditional_family(features, x_sample);
  if (family.rank() == 0) return 0.0;
  DualSolver solver(family, options.solver);

  std::vector<std::size_t> labels(n, 0);
  std::vector<double> counts(l.levels.size() * C, 0.0);
  for (std::size_t i = 0; i < n; ++i) counts[l.block_of[x_sample[i]] * C] += 1.0;
  LogSumExp acc;
  while (true) {
    acc.add(-solver.min_weighted_entropy(counts));
    std::size_t i = 0;
    while (i < n) {
      const std::size_t base = l.block_of[x_sample[i]] * C;
      counts[base + labels[i]] -= 1.0;
      if (++labels[i] < C) {
        counts[base + labels[i]] += 1.0;
        break;
      }
      labels[i] = 0;
      counts[base] += 1.0;
      ++i;
    }
    if (i == n) break;
  }
  return acc.value();
}

double count_label_groups(const Sample& x_sample, std::size_t classes) {
  double groups = 1.0;
  for (std::size_t c : x_sample.counts())
    if (c > 0) groups *= count_compositions(c, classes);
  return groups;
}

CondCompResult cond_comp_grouped(const CondFeatureTable& features, const Sample& x_sample,
                                 const CompOptions& options) {
  const std::size_t C = features.classes();
  if (count_label_groups(x_sample, C) > options.type_cap)
    return cond_comp_monte_carlo(features, x_sample, options.mc_draws, options.seed, options.solver);

  const Layout l = layout_of(features, x_sample);
  const auto family = make_conditional_family(features, x_sample);
  if (family.rank() == 0) return {0.0, CompMethod::type_class, std::nullopt};
  EntropyCache err(family, options.solver);
  const auto log_fact = log_factorial_table(x_sample.size());
  const std::size_t B = l.levels.size();

  std::vector<CompositionRange> ranges;
  ranges.reserve(B);
  for (std::size_t b = 0; b < B; ++b) ranges.emplace_back(l.level_counts[b], C);
  std::vector<double> log_weights(B);
  std::vector<double> counts(B * C);
  auto load = [&](std::size_t b) {
    const auto& comp = ranges[b].current();
    log_weights[b] = log_multinomial(comp, log_fact);
    for (std::size_t c = 0; c < C; ++c) counts[b * C + c] = static_cast<double>(comp[c]);
  };
  for (std::size_t b = 0; b < B; ++b) load(b);

  // With two classes, swapping the labels maps the model onto itself, so a
  // group and its complement share their fit; visit one of each pair.
  const bool binary = C == 2;
  const double ln2 = std::log(2.0);
  LogSumExp acc;
  while (true) {
    double lw = 0.0;
    for (double w : log_weights) lw += w;
    int order = 0;
    if (binary)
      for (std::size_t b = 0; b < B && order == 0; ++b) {
        const double a = counts[b * 2];
        const double a_swapped = counts[b * 2 + 1];
        order = a < a_swapped ? -1 : (a > a_swapped ? 1 : 0);
      }
    if (!binary) acc.add(lw - err(counts));
    else if (order < 0) acc.add(ln2 + lw - err(counts));
    else if (order == 0) acc.add(lw - err(counts));
    // Odometer with the last level varying fastest.
    std::size_t b = B;
    while (b > 0) {
      --b;
      if (ranges[b].next()) {
        load(b);
        break;
      }
      ranges[b] = CompositionRange(l.level_counts[b], C);
      load(b);
      if (b == 0) {
        b = B;
        break;
      }
    }
    if (b == B) break;
  }
  return {acc.value(), CompMethod::type_class, std::nullopt};
}

CondCompResult cond_comp_monte_carlo(const CondFeatureTable& features, const Sample& x_sample,
                                     std::size_t draws, std::uint64_t seed, const SolverOptions& options) {
  if (draws < 100) throw Error(ErrorCode::invalid_argument, "monte-carlo estimation needs at least 100 draws");
  const Layout l = layout_of(features, x_sample);
  const auto family = make_conditional_family(features, x_sample);
  if (family.rank() == 0) return {0.0, CompMethod::monte_carlo, 0.0};
  EntropyCache err(family, options);
  const std::size_t C = features.classes();
  const std::size_t B = l.levels.size();

  std::mt19937_64 engine(seed);
  std::vector<double> log_terms(draws);
  std::vector<double> counts(B * C);
  for (std::size_t d = 0; d < draws; ++d) {
    std::fill(counts.begin(), counts.end(), 0.0);
    for (std::size_t b = 0; b < B; ++b)
      for (std::size_t i = 0; i < l.level_counts[b]; ++i) counts[b * C + uniform_index(engine, C)] += 1.0;
    log_terms[d] = -err(counts);
  }
  LogSumExp acc;
  double shift = -std::numeric_limits<double>::infinity();
  for (double t : log_terms) {
    acc.add(t);
    shift = std::max(shift, t);
  }
  const double nd = static_cast<double>(draws);
  double mean = 0.0;
  for (double t : log_terms) mean += std::exp(t - shift);
  mean /= nd;
  double var = 0.0;
  for (double t : log_terms) {
    const double dv = std::exp(t - shift) - mean;
    var += dv * dv;
  }
  var /= nd - 1.0;
  const double n = static_cast<double>(x_sample.size());
  return {n * std::log(static_cast<double>(C)) + acc.value() - std::log(nd), CompMethod::monte_carlo,
          std::sqrt(var / nd) / mean};
}

CodelengthReport cond_nml(const CondFeatureTable& features, const Sample& x_sample,
                          std::span<const std::size_t> labels, CompMethod method, const CompOptions& options) {
  const double err = cond_err_codelength(features, x_sample, labels, options.solver);
  switch (method) {
    case CompMethod::exact_enum:
      return make_report(err, cond_comp_exact(features, x_sample, options), method);
    case CompMethod::type_class: {
      const auto r = cond_comp_grouped(features, x_sample, options);
      return make_report(err, r.comp_nats, r.method, r.stderr_nats);
    }
    case CompMethod::monte_carlo: {
      const auto r = cond_comp_monte_carlo(features, x_sample, options.mc_draws, options.seed, options.solver);
      return make_report(err, r.comp_nats, r.method, r.stderr_nats);
    }
  }
  throw Error(ErrorCode::invalid_argument, "unknown complexity method");
}

namespace {

// Per-sample log-normalizers and class logits at lambda.
void conditional_terms(const CondFeatureTable& features, std::size_t level, std::span<const double> lambdas,
                       std::vector<double>& logits, double& log_z) {
  const std::size_t C = features.classes();
  for (std::size_t c = 0; c < C; ++c) {
    logits[c] = 0.0;
    for (std::size_t k = 0; k < features.features(); ++k) logits[c] -= lambdas[k] * features(level, c, k);
  }
  log_z = log_sum_exp(logits);
}

}  // namespace

double conditional_objective(const CondFeatureTable& features, const Sample& x_sample,
                             std::span<const std::size_t> labels, std::span<const double> lambdas) {
  check_labels(features, x_sample, labels);
  if (lambdas.size() != features.features())
    throw Error(ErrorCode::invalid_argument, "lambda length does not match the conditional features");
  std::vector<double> logits(features.classes());
  double value = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    double log_z = 0.0;
    conditional_terms(features, x_sample[i], lambdas, logits, log_z);
    value += log_z - logits[labels[i]];
  }
  return value;
}

std::vector<double> conditional_gradient(const CondFeatureTable& features, const Sample& x_sample,
                                         std::span<const std::size_t> labels, std::span<const double> lambdas) {
  check_labels(features, x_sample, labels);
  if (lambdas.size() != features.features())
    throw Error(ErrorCode::invalid_argument, "lambda length does not match the conditional features");
  const std::size_t C = features.classes();
  const std::size_t F = features.features();
  std::vector<double> logits(C);
  std::vector<double> g(F, 0.0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    double log_z = 0.0;
    conditional_terms(features, x_sample[i], lambdas, logits, log_z);
    for (std::size_t k = 0; k < F; ++k) g[k] += features(x_sample[i], labels[i], k);
    for (std::size_t c = 0; c < C; ++c) {
      const double p = std::exp(logits[c] - log_z);
      for (std::size_t k = 0; k < F; ++k) g[k] -= p * features(x_sample[i], c, k);
    }
  }
  return g;
}

}  // namespace mdl
