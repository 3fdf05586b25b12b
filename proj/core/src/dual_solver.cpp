#include "mdl/dual_solver.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mdl/error.hpp"

namespace mdl {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double inf_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

LogLinearFamily::LogLinearFamily(std::vector<double> features, std::size_t num_features,
                                 std::vector<OutcomeBlock> blocks, double rank_tol)
    : num_outcomes_(blocks.empty() ? 0 : blocks.back().end),
      num_features_(num_features),
      rank_tol_(rank_tol),
      features_(std::move(features)),
      blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw Error(ErrorCode::invalid_argument, "log-linear family needs at least one block");
  std::size_t expected_begin = 0;
  for (const auto& b : blocks_) {
    if (b.begin != expected_begin || b.end <= b.begin)
      throw Error(ErrorCode::invalid_argument, "outcome blocks must tile the outcomes in order");
    if (!(b.weight > 0.0) || !std::isfinite(b.weight))
      throw Error(ErrorCode::invalid_argument, "outcome block weights must be positive");
    expected_begin = b.end;
    total_weight_ += b.weight;
    free_dimensions_ += b.size() - 1;
  }
  if (features_.size() != num_outcomes_ * num_features_)
    throw Error(ErrorCode::invalid_argument, "feature matrix size does not match outcomes x features");
  for (double v : features_)
    if (!std::isfinite(v)) throw Error(ErrorCode::range, "feature values must be finite");

  const std::size_t nb = blocks_.size();
  centers_.assign(nb * num_features_, 0.0);
  residual_scale_.assign(num_features_, 1.0);
  for (std::size_t bi = 0; bi < nb; ++bi) {
    const auto& b = blocks_[bi];
    for (std::size_t o = b.begin; o < b.end; ++o)
      for (std::size_t k = 0; k < num_features_; ++k) {
        centers_[bi * num_features_ + k] += feature(o, k);
        residual_scale_[k] = std::max(residual_scale_[k], std::abs(feature(o, k)));
      }
    for (std::size_t k = 0; k < num_features_; ++k)
      centers_[bi * num_features_ + k] /= static_cast<double>(b.size());
  }
  if (num_features_ == 0 || free_dimensions_ == 0) return;

  // Equilibrate columns, weight rows so that the Hessian at the per-block
  // uniform distribution is W * I in the whitened coordinates.
  std::vector<double> column_scale(num_features_, 0.0);
  for (std::size_t bi = 0; bi < nb; ++bi)
    for (std::size_t o = blocks_[bi].begin; o < blocks_[bi].end; ++o)
      for (std::size_t k = 0; k < num_features_; ++k)
        column_scale[k] = std::max(column_scale[k], std::abs(feature(o, k) - center(bi, k)));
  for (double& s : column_scale)
    if (s == 0.0) s = 1.0;

  Eigen::MatrixXd centered(num_outcomes_, num_features_);
  Eigen::MatrixXd design(num_outcomes_, num_features_);
  for (std::size_t bi = 0; bi < nb; ++bi) {
    const auto& b = blocks_[bi];
    const double row_weight = std::sqrt(b.weight / (total_weight_ * static_cast<double>(b.size())));
    for (std::size_t o = b.begin; o < b.end; ++o)
      for (std::size_t k = 0; k < num_features_; ++k) {
        const double c = (feature(o, k) - center(bi, k)) / column_scale[k];
        centered(o, k) = c;
        design(o, k) = row_weight * c;
      }
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || !(sv(0) > 0.0)) return;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > rank_tol * sv(0)) ++rank_;
  if (rank_ == 0) return;

  const Eigen::MatrixXd basis =
      svd.matrixV().leftCols(rank_) * sv.head(rank_).cwiseInverse().asDiagonal();
  transform_.resize(num_features_ * rank_);
  for (std::size_t k = 0; k < num_features_; ++k)
    for (std::size_t i = 0; i < rank_; ++i) transform_[k * rank_ + i] = basis(k, i) / column_scale[k];
  const Eigen::MatrixXd psi = centered * basis;
  whitened_.resize(num_outcomes_ * rank_);
  for (std::size_t o = 0; o < num_outcomes_; ++o)
    for (std::size_t i = 0; i < rank_; ++i) whitened_[o * rank_ + i] = psi(o, i);
}

std::vector<double> LogLinearFamily::feature_sums(std::span<const double> counts) const {
  if (counts.size() != num_outcomes_)
    throw Error(ErrorCode::invalid_argument, "count vector length does not match the number of outcomes");
  std::vector<double> sums(num_features_, 0.0);
  for (std::size_t o = 0; o < num_outcomes_; ++o) {
    if (counts[o] == 0.0) continue;
    for (std::size_t k = 0; k < num_features_; ++k) sums[k] += counts[o] * feature(o, k);
  }
  return sums;
}

LogLinearFamily LogLinearFamily::restrict_to(std::span<const char> keep) const {
  if (keep.size() != num_outcomes_)
    throw Error(ErrorCode::invalid_argument, "keep mask length does not match the number of outcomes");
  std::vector<double> features;
  std::vector<OutcomeBlock> blocks;
  std::size_t next = 0;
  for (const auto& b : blocks_) {
    const std::size_t begin = next;
    for (std::size_t o = b.begin; o < b.end; ++o) {
      if (!keep[o]) continue;
      for (std::size_t k = 0; k < num_features_; ++k) features.push_back(feature(o, k));
      ++next;
    }
    if (next == begin) throw Error(ErrorCode::invalid_argument, "restriction empties an outcome block");
    blocks.push_back({begin, next, b.weight});
  }
  return LogLinearFamily(std::move(features), num_features_, std::move(blocks), rank_tol_);
}

DualSolver::DualSolver(const LogLinearFamily& family, SolverOptions options)
    : family_(family), options_(options) {
  const std::size_t r = family_.rank();
  const std::size_t o = family_.num_outcomes();
  const std::size_t f = family_.num_features();
  target_.assign(f, 0.0);
  whitened_target_.assign(r, 0.0);
  theta_.assign(r, 0.0);
  trial_.assign(r, 0.0);
  logits_.assign(o, 0.0);
  probs_.assign(o, 0.0);
  log_norm_.assign(family_.num_blocks(), 0.0);
  active_.assign(o, 1);
  residual_.assign(f, 0.0);
  grad_.assign(r, 0.0);
  hess_.assign(r * r, 0.0);
  chol_.assign(r * r, 0.0);
  step_.assign(r, 0.0);
  mean_.assign(r, 0.0);
  null_pivot_.assign(r, 0);
}

double DualSolver::evaluate(std::span<const double> theta, bool keep_probs) {
  const std::size_t r = family_.rank();
  const auto& blocks = family_.blocks();
  double objective = 0.0;
  for (std::size_t i = 0; i < r; ++i) objective += theta[i] * whitened_target_[i];
  for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
    const auto& b = blocks[bi];
    double max_logit = kNegInf;
    for (std::size_t o = b.begin; o < b.end; ++o) {
      if (!active_[o]) continue;
      double a = 0.0;
      for (std::size_t i = 0; i < r; ++i) a -= theta[i] * family_.whitened(o, i);
      logits_[o] = a;
      max_logit = std::max(max_logit, a);
    }
    double sum = 0.0;
    for (std::size_t o = b.begin; o < b.end; ++o)
      if (active_[o]) sum += std::exp(logits_[o] - max_logit);
    const double log_z = max_logit + std::log(sum);
    objective += b.weight * log_z;
    if (keep_probs) {
      log_norm_[bi] = log_z;
      for (std::size_t o = b.begin; o < b.end; ++o)
        probs_[o] = active_[o] ? std::exp(logits_[o] - log_z) : 0.0;
    }
  }
  return objective;
}

void DualSolver::gradient() {
  const std::size_t f = family_.num_features();
  const std::size_t r = family_.rank();
  const auto& blocks = family_.blocks();
  std::copy(target_.begin(), target_.end(), residual_.begin());
  for (const auto& b : blocks)
    for (std::size_t o = b.begin; o < b.end; ++o) {
      if (!active_[o] || probs_[o] == 0.0) continue;
      const double wp = b.weight * probs_[o];
      for (std::size_t k = 0; k < f; ++k) residual_[k] -= wp * family_.feature(o, k);
    }
  max_residual_ = 0.0;
  const double w = family_.total_weight();
  for (std::size_t k = 0; k < f; ++k)
    max_residual_ = std::max(max_residual_, std::abs(residual_[k]) / (w * family_.residual_scale(k)));
  for (std::size_t i = 0; i < r; ++i) {
    double g = 0.0;
    for (std::size_t k = 0; k < f; ++k) g += family_.transform(k, i) * residual_[k];
    grad_[i] = g;
  }
}

void DualSolver::hessian() {
  const std::size_t r = family_.rank();
  std::fill(hess_.begin(), hess_.end(), 0.0);
  for (const auto& b : family_.blocks()) {
    std::fill(mean_.begin(), mean_.end(), 0.0);
    for (std::size_t o = b.begin; o < b.end; ++o) {
      if (!active_[o]) continue;
      for (std::size_t i = 0; i < r; ++i) mean_[i] += probs_[o] * family_.whitened(o, i);
    }
    for (std::size_t o = b.begin; o < b.end; ++o) {
      if (!active_[o] || probs_[o] == 0.0) continue;
      const double wp = b.weight * probs_[o];
      for (std::size_t i = 0; i < r; ++i) {
        const double di = family_.whitened(o, i) - mean_[i];
        for (std::size_t j = 0; j <= i; ++j)
          hess_[i * r + j] += wp * di * (family_.whitened(o, j) - mean_[j]);
      }
    }
  }
}

// Cholesky of the (semi-definite) Hessian; pivots below tolerance mark
// directions with no curvature, whose step component is set to zero.
bool DualSolver::newton_direction() {
  const std::size_t r = family_.rank();
  const double pivot_tol = 1e-14 * family_.total_weight();
  std::fill(chol_.begin(), chol_.end(), 0.0);
  for (std::size_t j = 0; j < r; ++j) {
    double diag = hess_[j * r + j];
    for (std::size_t k = 0; k < j; ++k) diag -= chol_[j * r + k] * chol_[j * r + k];
    if (!(diag > pivot_tol)) {
      null_pivot_[j] = 1;
      continue;
    }
    null_pivot_[j] = 0;
    const double ljj = std::sqrt(diag);
    chol_[j * r + j] = ljj;
    for (std::size_t i = j + 1; i < r; ++i) {
      double s = hess_[i * r + j];
      for (std::size_t k = 0; k < j; ++k) s -= chol_[i * r + k] * chol_[j * r + k];
      chol_[i * r + j] = s / ljj;
    }
  }
  bool any = false;
  for (std::size_t j = 0; j < r; ++j) {
    if (null_pivot_[j]) {
      step_[j] = 0.0;
      continue;
    }
    double s = -grad_[j];
    for (std::size_t k = 0; k < j; ++k) s -= chol_[j * r + k] * step_[k];
    step_[j] = s / chol_[j * r + j];
    any = true;
  }
  for (std::size_t jj = r; jj-- > 0;) {
    if (null_pivot_[jj]) continue;
    double s = step_[jj];
    for (std::size_t k = jj + 1; k < r; ++k) s -= chol_[k * r + jj] * step_[k];
    step_[jj] = s / chol_[jj * r + jj];
  }
  return any;
}

void DualSolver::solve(std::span<const double> feature_sums) {
  const bool reuse = options_.warm_start && warm_ && inf_norm(theta_) <= 0.5 * options_.lambda_cap;
  warm_ = false;
  if (reuse) {
    // Only interior results are kept from a warm start; anything else is
    // redone from the origin.
    try {
      solve_from(feature_sums, true);
      if (!reduced_) return;
    } catch (const Error&) {
    }
  }
  solve_from(feature_sums, false);
}

void DualSolver::solve_from(std::span<const double> feature_sums, bool reuse) {
  warm_ = false;
  const std::size_t r = family_.rank();
  const std::size_t f = family_.num_features();
  const auto& blocks = family_.blocks();
  if (feature_sums.size() != f)
    throw Error(ErrorCode::invalid_argument, "target length does not match the number of features");
  std::copy(feature_sums.begin(), feature_sums.end(), target_.begin());
  for (double v : target_)
    if (!std::isfinite(v)) throw Error(ErrorCode::range, "target moments must be finite");

  // Whitened target t = T^T (S - sum_b w_b c_b).
  for (std::size_t i = 0; i < r; ++i) {
    double t = 0.0;
    for (std::size_t k = 0; k < f; ++k) {
      double centered = target_[k];
      for (std::size_t bi = 0; bi < blocks.size(); ++bi) centered -= blocks[bi].weight * family_.center(bi, k);
      t += family_.transform(k, i) * centered;
    }
    whitened_target_[i] = t;
  }
  if (!reuse) std::fill(theta_.begin(), theta_.end(), 0.0);
  std::fill(active_.begin(), active_.end(), 1);
  reduced_ = false;
  hit_cap_ = false;
  face_solved_ = false;
  iterations_ = 0;

  const double w = family_.total_weight();
  bool stalled = false;

  // Set when the accepted trial was the last point evaluated, so its
  // probabilities are already in place.
  bool fresh = false;
  while (true) {
    if (!fresh) objective_ = evaluate(theta_, true);
    fresh = false;
    gradient();
    const double theta_norm = inf_norm(theta_);
    if (theta_norm > options_.lambda_cap) hit_cap_ = true;

    if (max_residual_ <= options_.residual_tol || theta_norm > options_.lambda_cap || stalled) {
      bool dropped = false;
      for (const auto& b : blocks) {
        std::size_t best = b.begin;
        for (std::size_t o = b.begin; o < b.end; ++o)
          if (active_[o] && (!active_[best] || probs_[o] > probs_[best])) best = o;
        for (std::size_t o = b.begin; o < b.end; ++o)
          if (active_[o] && o != best && probs_[o] < options_.drop_threshold) {
            active_[o] = 0;
            dropped = true;
          }
      }
      if (dropped) {
        reduced_ = true;
        if (max_residual_ <= options_.residual_tol) {
          objective_ = evaluate(theta_, true);
          gradient();
          break;
        }
        // The face target is interior in the face's own coordinates.
        solve_on_face(feature_sums);
        return;
      }
      if (max_residual_ <= options_.residual_tol || stalled) break;
    }
    if (r == 0 || iterations_ >= options_.max_iterations) break;
    ++iterations_;

    hessian();
    if (!newton_direction()) {
      stalled = true;
      continue;
    }
    double decrement = 0.0;
    for (std::size_t i = 0; i < r; ++i) decrement -= grad_[i] * step_[i];
    if (!(decrement > 0.0)) {
      stalled = true;
      continue;
    }

    // Allowance for rounding in the objective so that steps whose predicted
    // decrease is below its resolution are not rejected as noise.
    const double slack = 1e-13 * std::max(1.0, std::abs(objective_));
    double t = 1.0;
    double last_t = 0.0;
    double f_trial = 0.0;
    bool accepted = false;
    while (t > 1e-12) {
      for (std::size_t i = 0; i < r; ++i) trial_[i] = theta_[i] + t * step_[i];
      f_trial = evaluate(trial_, true);
      last_t = t;
      if (f_trial <= objective_ - options_.armijo * t * decrement + slack) {
        accepted = true;
        break;
      }
      t *= options_.backtrack;
    }
    if (!accepted) {
      stalled = true;
      continue;
    }
    // Decrease beyond the quadratic model signals a direction of recession
    // (boundary target); extend the step while the objective keeps falling.
    if (t == 1.0 && objective_ - f_trial > 0.55 * decrement) {
      const double reach = std::max(2.0 * theta_norm, options_.lambda_cap);
      for (double t2 = 2.0; t2 <= 1048576.0; t2 *= 2.0) {
        for (std::size_t i = 0; i < r; ++i) trial_[i] = theta_[i] + t2 * step_[i];
        if (inf_norm(trial_) > reach) break;
        const double f2 = evaluate(trial_, true);
        last_t = t2;
        if (!(f2 < f_trial)) break;
        f_trial = f2;
        t = t2;
      }
    }
    for (std::size_t i = 0; i < r; ++i) theta_[i] += t * step_[i];
    if (last_t == t) {
      objective_ = f_trial;
      fresh = true;
    }
  }

  if (max_residual_ <= options_.loose_residual_tol) {
    warm_ = !reduced_;
    return;
  }

  double grad_norm = 0.0;
  for (double g : grad_) grad_norm = std::max(grad_norm, std::abs(g) / w);
  const std::string detail = "max scaled moment residual " + std::to_string(max_residual_) + " after " +
                             std::to_string(iterations_) + " iterations";
  if (reduced_ || hit_cap_ || grad_norm < 1e-9)
    throw Error(ErrorCode::infeasible, "constraints lie outside the moment polytope (" + detail + ")");
  throw ConvergenceError("dual solver did not converge: " + detail, max_residual_, iterations_);
}

void DualSolver::solve_on_face(std::span<const double> feature_sums) {
  const LogLinearFamily face = family_.restrict_to(active_);
  DualSolver sub(face, options_);
  const DualFit fit = sub.fit_sums(feature_sums);
  std::fill(probs_.begin(), probs_.end(), 0.0);
  std::size_t j = 0;
  for (std::size_t o = 0; o < family_.num_outcomes(); ++o) {
    if (!active_[o]) continue;
    active_[o] = fit.support[j] ? 1 : 0;
    probs_[o] = fit.probs[j];
    logits_[o] = fit.log_probs[j];
    ++j;
  }
  std::fill(log_norm_.begin(), log_norm_.end(), 0.0);
  face_lambdas_ = fit.lambdas;
  face_log_normalizers_ = fit.log_normalizers;
  face_solved_ = true;
  objective_ = fit.dual_objective;
  max_residual_ = fit.max_residual;
  iterations_ += fit.iterations;
  if (sub.hit_cap_) hit_cap_ = true;
}

double DualSolver::weighted_entropy() const {
  double h = 0.0;
  for (std::size_t bi = 0; bi < family_.num_blocks(); ++bi) {
    const auto& b = family_.blocks()[bi];
    double hb = 0.0;
    for (std::size_t o = b.begin; o < b.end; ++o) {
      if (!active_[o] || probs_[o] == 0.0) continue;
      hb -= probs_[o] * (logits_[o] - log_norm_[bi]);
    }
    h += b.weight * hb;
  }
  return std::max(h, 0.0);
}

DualFit DualSolver::materialize() const {
  const std::size_t r = family_.rank();
  const std::size_t f = family_.num_features();
  DualFit fit;
  fit.probs.assign(probs_.begin(), probs_.end());
  fit.log_probs.resize(probs_.size());
  fit.support.resize(probs_.size());
  for (std::size_t bi = 0; bi < family_.num_blocks(); ++bi) {
    const auto& b = family_.blocks()[bi];
    for (std::size_t o = b.begin; o < b.end; ++o) {
      const bool on = active_[o] && probs_[o] > 0.0;
      fit.support[o] = on;
      fit.log_probs[o] = on ? logits_[o] - log_norm_[bi] : kNegInf;
      if (!on) fit.probs[o] = 0.0;
    }
  }
  if (face_solved_) {
    fit.lambdas = face_lambdas_;
    fit.log_normalizers = face_log_normalizers_;
  } else {
    fit.lambdas.assign(f, 0.0);
    for (std::size_t k = 0; k < f; ++k)
      for (std::size_t i = 0; i < r; ++i) fit.lambdas[k] += family_.transform(k, i) * theta_[i];
    fit.log_normalizers.resize(family_.num_blocks());
    for (std::size_t bi = 0; bi < family_.num_blocks(); ++bi) {
      double shift = 0.0;
      for (std::size_t k = 0; k < f; ++k) shift += fit.lambdas[k] * family_.center(bi, k);
      fit.log_normalizers[bi] = log_norm_[bi] - shift;
    }
  }
  fit.weighted_entropy = weighted_entropy();
  fit.dual_objective = objective_;
  fit.max_residual = max_residual_;
  fit.iterations = iterations_;
  fit.reduced_support = reduced_;
  return fit;
}

DualFit DualSolver::fit_sums(std::span<const double> feature_sums) {
  solve(feature_sums);
  return materialize();
}

DualFit DualSolver::fit_counts(std::span<const double> counts) {
  if (counts.size() != family_.num_outcomes())
    throw Error(ErrorCode::invalid_argument, "count vector length does not match the number of outcomes");
  for (const auto& b : family_.blocks()) {
    double total = 0.0;
    for (std::size_t o = b.begin; o < b.end; ++o) {
      if (counts[o] < 0.0) throw Error(ErrorCode::invalid_argument, "counts must be non-negative");
      total += counts[o];
    }
    if (std::abs(total - b.weight) > 1e-9 * std::max(1.0, b.weight))
      throw Error(ErrorCode::invalid_argument, "block counts must sum to the block weight");
  }
  return fit_sums(family_.feature_sums(counts));
}

double DualSolver::min_weighted_entropy(std::span<const double> counts) {
  if (family_.saturated()) {
    double h = 0.0;
    for (const auto& b : family_.blocks())
      for (std::size_t o = b.begin; o < b.end; ++o)
        if (counts[o] > 0.0) h -= counts[o] * std::log(counts[o] / b.weight);
    return std::max(h, 0.0);
  }
  const std::size_t f = family_.num_features();
  std::vector<double>& sums = residual_;  // reused as scratch before solve copies it
  std::fill(sums.begin(), sums.end(), 0.0);
  for (std::size_t o = 0; o < family_.num_outcomes(); ++o) {
    if (counts[o] == 0.0) continue;
    for (std::size_t k = 0; k < f; ++k) sums[k] += counts[o] * family_.feature(o, k);
  }
  std::copy(sums.begin(), sums.end(), target_.begin());
  solve(target_);
  return weighted_entropy();
}

}  // namespace mdl
