#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mdl {

// A group of outcomes that share one normalizer. The generative model is a
// single block over the alphabet; the conditional model has one block per
// observed x-level whose outcomes are the classes.
struct OutcomeBlock {
  std::size_t begin = 0;
  std::size_t end = 0;
  double weight = 1.0;

  std::size_t size() const noexcept { return end - begin; }
};

struct SolverOptions {
  // Convergence: max_k |E[phi_k] - target_k| / max(1, max|phi_k|), per unit weight.
  double residual_tol = 1e-13;
  // Accepted when Newton stagnates at machine precision above residual_tol.
  double loose_residual_tol = 1e-9;
  int max_iterations = 200;
  // Infinity-norm bound on the whitened multipliers that triggers face reduction.
  double lambda_cap = 40.0;
  // Outcomes below this probability are removed when reducing to a face.
  double drop_threshold = 1e-12;
  double armijo = 1e-4;
  double backtrack = 0.5;
  // Relative singular-value cutoff used to discard dependent feature directions.
  double rank_tol = 1e-10;
  // Start from the previous solution when it was interior and moderate.
  // Results then depend on the call order (to rounding), so enable only
  // where that order is fixed.
  bool warm_start = false;
};

// Log-linear family p(o | b) proportional to exp(-lambda . phi(o)) over blocks
// of outcomes. Construction computes a whitened basis for the identifiable
// directions of the multipliers; every fit against the same family reuses it.
class LogLinearFamily {
 public:
  // `features` is num_outcomes x num_features, row-major. Blocks must tile
  // [0, num_outcomes) in order and carry positive weights.
  LogLinearFamily(std::vector<double> features, std::size_t num_features,
                  std::vector<OutcomeBlock> blocks, double rank_tol = 1e-10);

  std::size_t num_outcomes() const noexcept { return num_outcomes_; }
  std::size_t num_features() const noexcept { return num_features_; }
  std::size_t num_blocks() const noexcept { return blocks_.size(); }
  std::size_t rank() const noexcept { return rank_; }
  double total_weight() const noexcept { return total_weight_; }
  const std::vector<OutcomeBlock>& blocks() const noexcept { return blocks_; }

  // True when the features span every within-block direction, so the fit to
  // count data is the empirical conditional distribution itself.
  bool saturated() const noexcept { return rank_ == free_dimensions_; }

  double feature(std::size_t outcome, std::size_t k) const noexcept {
    return features_[outcome * num_features_ + k];
  }
  double whitened(std::size_t outcome, std::size_t i) const noexcept {
    return whitened_[outcome * rank_ + i];
  }
  double transform(std::size_t k, std::size_t i) const noexcept {
    return transform_[k * rank_ + i];
  }
  double center(std::size_t block, std::size_t k) const noexcept {
    return centers_[block * num_features_ + k];
  }
  double residual_scale(std::size_t k) const noexcept { return residual_scale_[k]; }

  // sum_o counts_o phi(o); counts must match the block weights.
  std::vector<double> feature_sums(std::span<const double> counts) const;

  // The family over the outcomes with keep[o] != 0, rewhitened. Every block
  // must keep at least one outcome.
  LogLinearFamily restrict_to(std::span<const char> keep) const;

 private:
  std::size_t num_outcomes_;
  std::size_t num_features_;
  std::size_t rank_ = 0;
  std::size_t free_dimensions_ = 0;
  double total_weight_ = 0.0;
  double rank_tol_;
  std::vector<double> features_;
  std::vector<OutcomeBlock> blocks_;
  std::vector<double> centers_;
  std::vector<double> transform_;
  std::vector<double> whitened_;
  std::vector<double> residual_scale_;
};

struct DualFit {
  std::vector<double> probs;          // per outcome; zero off the support
  std::vector<double> log_probs;      // -inf off the support
  std::vector<double> lambdas;        // multipliers in original feature units
  std::vector<double> log_normalizers;  // lambda_0 per block
  std::vector<bool> support;
  // -sum_b w_b sum_o p ln p; equals the minimized dual objective.
  double weighted_entropy = 0.0;
  double dual_objective = 0.0;
  double max_residual = 0.0;          // scaled, per unit weight
  int iterations = 0;
  bool reduced_support = false;
};

// Damped Newton on the convex dual
//   f(lambda) = lambda . S + sum_b w_b ln Z_b(lambda),
// whose gradient is S - sum_b w_b E_b[phi] and whose Hessian is the weighted
// feature covariance. Boundary targets are realized on the exposed face by
// dropping outcomes whose probability underflows the drop threshold.
//
// A solver owns scratch space and is not safe for concurrent use; create one
// per thread. Without warm_start, results do not depend on previous calls.
class DualSolver {
 public:
  explicit DualSolver(const LogLinearFamily& family, SolverOptions options = {});

  // Target given as feature sums S (original units, already weighted).
  DualFit fit_sums(std::span<const double> feature_sums);
  // Target given as per-outcome counts; block sums must equal block weights.
  DualFit fit_counts(std::span<const double> counts);

  // Minimized dual objective (= weighted entropy) for count data, without
  // materializing a DualFit. Uses the closed form for saturated families.
  double min_weighted_entropy(std::span<const double> counts);

  const LogLinearFamily& family() const noexcept { return family_; }
  const SolverOptions& options() const noexcept { return options_; }

 private:
  void solve(std::span<const double> feature_sums);
  void solve_from(std::span<const double> feature_sums, bool reuse);
  void solve_on_face(std::span<const double> feature_sums);
  double evaluate(std::span<const double> theta, bool keep_probs);
  void gradient();
  void hessian();
  bool newton_direction();
  double weighted_entropy() const;
  DualFit materialize() const;

  const LogLinearFamily& family_;
  SolverOptions options_;

  std::vector<double> target_;     // S, original units
  std::vector<double> whitened_target_;
  std::vector<double> theta_;
  std::vector<double> trial_;
  std::vector<double> logits_;
  std::vector<double> probs_;
  std::vector<double> log_norm_;
  std::vector<char> active_;
  std::vector<double> residual_;   // S - sum w E[phi], original units
  std::vector<double> grad_;
  std::vector<double> hess_;
  std::vector<double> chol_;
  std::vector<double> step_;
  std::vector<double> mean_;
  std::vector<char> null_pivot_;
  double objective_ = 0.0;
  double max_residual_ = 0.0;
  int iterations_ = 0;
  bool reduced_ = false;
  bool hit_cap_ = false;
  bool warm_ = false;  // theta_ holds a reusable interior solution
  // Set when the final fit came from a rewhitened face; overrides theta_.
  bool face_solved_ = false;
  std::vector<double> face_lambdas_;
  std::vector<double> face_log_normalizers_;
};

}  // namespace mdl
