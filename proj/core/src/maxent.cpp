#include "mdl/maxent.hpp"

#include <cmath>
#include <limits>

#include "mdl/error.hpp"
#include "mdl/numeric.hpp"

namespace mdl {

LogLinearFamily make_generative_family(const FeatureTable& features, double weight) {
  std::vector<double> values(features.values().begin(), features.values().end());
  return LogLinearFamily(std::move(values), features.cols(), {OutcomeBlock{0, features.rows(), weight}});
}

MaxEntDistribution fit_maxent(const FeatureTable& features, const MomentVector& moments,
                              const SolverOptions& options) {
  if (moments.means.size() != features.cols())
    throw Error(ErrorCode::invalid_argument, "moment vector length does not match the feature table");
  const LogLinearFamily family = make_generative_family(features);
  DualSolver solver(family, options);
  DualFit fit = solver.fit_sums(moments.means);

  MaxEntDistribution dist;
  dist.probs = std::move(fit.probs);
  dist.lambdas.reserve(features.cols() + 1);
  dist.lambdas.push_back(fit.log_normalizers.front());
  dist.lambdas.insert(dist.lambdas.end(), fit.lambdas.begin(), fit.lambdas.end());
  for (std::size_t j = 0; j < dist.probs.size(); ++j)
    if (fit.support[j]) dist.support.push_back(j);
  dist.entropy_nats = fit.weighted_entropy;
  dist.reduced_support = fit.reduced_support;
  dist.max_residual = fit.max_residual;
  dist.iterations = fit.iterations;
  return dist;
}

double entropy(const MaxEntDistribution& dist) noexcept { return entropy_of(dist.probs); }

LogLikelihood log_likelihood(const MaxEntDistribution& dist, const Sample& sample) {
  if (sample.alphabet_size() != dist.probs.size())
    throw Error(ErrorCode::invalid_argument, "sample alphabet does not match the distribution");
  // Accumulate per symbol so that ln p is taken once per distinct symbol.
  const auto counts = sample.counts();
  LogLikelihood ll;
  for (std::size_t j = 0; j < counts.size(); ++j) {
    if (counts[j] == 0) continue;
    if (dist.probs[j] <= 0.0) {
      ll.zero_probability = true;
      ll.nats = -std::numeric_limits<double>::infinity();
      return ll;
    }
    ll.nats += static_cast<double>(counts[j]) * std::log(dist.probs[j]);
  }
  return ll;
}

namespace {

void check_dual_args(const FeatureTable& features, const MomentVector& moments,
                     std::span<const double> lambdas) {
  if (moments.means.size() != features.cols() || lambdas.size() != features.cols())
    throw Error(ErrorCode::invalid_argument, "dual arguments do not match the feature table");
}

std::vector<double> logits_at(const FeatureTable& features, std::span<const double> lambdas) {
  std::vector<double> a(features.rows(), 0.0);
  for (std::size_t j = 0; j < features.rows(); ++j)
    for (std::size_t k = 0; k < features.cols(); ++k) a[j] -= lambdas[k] * features(j, k);
  return a;
}

}  // namespace

double dual_objective(const FeatureTable& features, const MomentVector& moments,
                      std::span<const double> lambdas) {
  check_dual_args(features, moments, lambdas);
  const auto a = logits_at(features, lambdas);
  double value = log_sum_exp(a);
  for (std::size_t k = 0; k < features.cols(); ++k) value += lambdas[k] * moments.means[k];
  return value;
}

std::vector<double> dual_gradient(const FeatureTable& features, const MomentVector& moments,
                                  std::span<const double> lambdas) {
  check_dual_args(features, moments, lambdas);
  const auto a = logits_at(features, lambdas);
  const double log_z = log_sum_exp(a);
  std::vector<double> g(moments.means);
  for (std::size_t j = 0; j < features.rows(); ++j) {
    const double p = std::exp(a[j] - log_z);
    for (std::size_t k = 0; k < features.cols(); ++k) g[k] -= p * features(j, k);
  }
  return g;
}

}  // namespace mdl
