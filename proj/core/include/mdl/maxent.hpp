#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mdl/alphabet.hpp"
#include "mdl/dual_solver.hpp"
#include "mdl/features.hpp"

namespace mdl {

// Fitted member p(x_j) = exp(-lambda_0 - sum_k lambda_k phi_k(x_j)) of the
// maximum-entropy family. lambdas holds (lambda_0, ..., lambda_m).
struct MaxEntDistribution {
  std::vector<double> probs;
  std::vector<double> lambdas;
  std::vector<std::size_t> support;
  double entropy_nats = 0.0;
  // True when the moments sit on the boundary of the moment polytope and the
  // distribution was realized on a face.
  bool reduced_support = false;
  double max_residual = 0.0;
  int iterations = 0;
};

// Maximum-entropy distribution whose feature expectations equal `moments`.
// Throws ErrorCode::infeasible for moments outside the moment polytope and
// ConvergenceError when the Newton iteration cap is reached.
MaxEntDistribution fit_maxent(const FeatureTable& features, const MomentVector& moments,
                              const SolverOptions& options = {});

double entropy(const MaxEntDistribution& dist) noexcept;

struct LogLikelihood {
  double nats = 0.0;
  // Set when some sample point has zero probability; nats is then -inf.
  bool zero_probability = false;
};

LogLikelihood log_likelihood(const MaxEntDistribution& dist, const Sample& sample);

// ln Z(lambda) + sum_k lambda_k mean_k for lambda = (lambda_1..lambda_m); the
// convex dual whose minimum is the maximum entropy.
double dual_objective(const FeatureTable& features, const MomentVector& moments,
                      std::span<const double> lambdas);

// Analytic gradient of dual_objective: mean - E_p[phi].
std::vector<double> dual_gradient(const FeatureTable& features, const MomentVector& moments,
                                  std::span<const double> lambdas);

// Single-block family over the rows of a feature table.
LogLinearFamily make_generative_family(const FeatureTable& features, double weight = 1.0);

}  // namespace mdl
