#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mdl/alphabet.hpp"
#include "mdl/codelength.hpp"
#include "mdl/dual_solver.hpp"

namespace mdl {

// Ordered, distinct class labels; at least two.
class ClassSet {
 public:
  explicit ClassSet(std::vector<std::string> labels);
  static ClassSet numbered(std::size_t count);

  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::optional<std::size_t> index_of(const std::string& label) const;

 private:
  std::vector<std::string> labels_;
};

// Joint features phi_k(x_j, c), stored as ((j * C + c) * F + k).
class CondFeatureTable {
 public:
  CondFeatureTable(std::size_t levels, std::size_t classes, std::size_t features, std::vector<double> values);

  std::size_t levels() const noexcept { return levels_; }
  std::size_t classes() const noexcept { return classes_; }
  std::size_t features() const noexcept { return features_; }

  double operator()(std::size_t j, std::size_t c, std::size_t k) const noexcept {
    return values_[(j * classes_ + c) * features_ + k];
  }
  std::span<const double> row(std::size_t j, std::size_t c) const noexcept {
    return std::span<const double>(values_).subspan((j * classes_ + c) * features_, features_);
  }

 private:
  std::size_t levels_;
  std::size_t classes_;
  std::size_t features_;
  std::vector<double> values_;
};

// Per-class moment features x^k [c = c'] for every non-reference class c'
// (class 0 is the reference). k runs over 0..m with the intercept, 1..m
// without it.
CondFeatureTable build_cond_moment_features(const Alphabet& alphabet, const ClassSet& classes, std::size_t m,
                                            bool intercept = true);

struct ConditionalModel {
  std::size_t levels = 0;
  std::size_t classes = 0;
  std::vector<double> lambdas;
  std::vector<double> cond_probs;  // levels x classes, row-major
  // H(C | X) under the empirical distribution of x, in nats per sample.
  double cond_entropy_nats = 0.0;
  double err_nats = 0.0;
  bool reduced_support = false;
  double max_residual = 0.0;
  int iterations = 0;

  double prob(std::size_t level, std::size_t c) const { return cond_probs.at(level * classes + c); }
};

// Blocks are the distinct x-levels present in the sample, in increasing order;
// each block's outcomes are the classes.
LogLinearFamily make_conditional_family(const CondFeatureTable& features, const Sample& x_sample);

// Per-(observed level, class) counts in the layout of make_conditional_family.
std::vector<double> conditional_counts(const CondFeatureTable& features, const Sample& x_sample,
                                       std::span<const std::size_t> labels);

ConditionalModel fit_conditional(const CondFeatureTable& features, const Sample& x_sample,
                                 std::span<const std::size_t> labels, const SolverOptions& options = {});

// n H(p*) = -sum_i ln p*(c_i | x_i) at the conditional maximum-likelihood fit.
double cond_err_codelength(const CondFeatureTable& features, const Sample& x_sample,
                           std::span<const std::size_t> labels, const SolverOptions& options = {});

// ln sum over all |C|^n label sequences of exp(-n H(p*_y)); refits per sequence.
double cond_comp_exact(const CondFeatureTable& features, const Sample& x_sample, const CompOptions& options = {});

struct CondCompResult {
  double comp_nats = 0.0;
  CompMethod method = CompMethod::type_class;
  std::optional<double> stderr_nats;
};

// The exact sum grouped by per-level label-count arrays. Falls back to the
// Monte-Carlo estimator when the number of groups exceeds options.type_cap.
CondCompResult cond_comp_grouped(const CondFeatureTable& features, const Sample& x_sample,
                                 const CompOptions& options = {});

CondCompResult cond_comp_monte_carlo(const CondFeatureTable& features, const Sample& x_sample,
                                     std::size_t draws, std::uint64_t seed, const SolverOptions& options = {});

// Number of label-count groups the grouped computation visits.
double count_label_groups(const Sample& x_sample, std::size_t classes);

CodelengthReport cond_nml(const CondFeatureTable& features, const Sample& x_sample,
                          std::span<const std::size_t> labels, CompMethod method, const CompOptions& options = {});

// Negative conditional log-likelihood at lambda and its analytic gradient
// (empirical feature sums minus their model expectations).
double conditional_objective(const CondFeatureTable& features, const Sample& x_sample,
                             std::span<const std::size_t> labels, std::span<const double> lambdas);
std::vector<double> conditional_gradient(const CondFeatureTable& features, const Sample& x_sample,
                                         std::span<const std::size_t> labels, std::span<const double> lambdas);

}  // namespace mdl
