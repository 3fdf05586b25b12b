#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "mdl/error.hpp"
#include "mdl/maxent.hpp"
#include "mdl/numeric.hpp"
#include "oracles.hpp"

namespace {

using mdl::Alphabet;
using mdl::FeatureTable;
using mdl::MomentVector;
using mdl::Sample;

MomentVector moments_of(const FeatureTable& f, const std::vector<double>& p) {
  MomentVector m;
  m.means.assign(f.cols(), 0.0);
  for (std::size_t j = 0; j < f.rows(); ++j)
    for (std::size_t k = 0; k < f.cols(); ++k) m.means[k] += p[j] * f(j, k);
  return m;
}

TEST(FitMaxent, UniformWhenMeanIsCentral) {
  const auto f = mdl::build_moment_features(Alphabet({0, 1, 2}), 1);
  const auto d = mdl::fit_maxent(f, {{1.0}});
  for (double p : d.probs) EXPECT_NEAR(p, 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(d.entropy_nats, std::log(3.0), 1e-12);
  EXPECT_FALSE(d.reduced_support);
}

TEST(FitMaxent, BinaryDeterminedByMean) {
  const auto f = mdl::build_moment_features(Alphabet({0, 1}), 1);
  const auto d = mdl::fit_maxent(f, {{0.25}});
  EXPECT_NEAR(d.probs[0], 0.75, 1e-12);
  EXPECT_NEAR(d.probs[1], 0.25, 1e-12);
  EXPECT_NEAR(d.entropy_nats, 0.5623351446188083, 1e-10);
}

TEST(FitMaxent, BoundaryMeanGivesPointMass) {
  const auto f = mdl::build_moment_features(Alphabet({0, 1, 2}), 1);
  const auto d = mdl::fit_maxent(f, {{0.0}});
  EXPECT_NEAR(d.probs[0], 1.0, 1e-12);
  EXPECT_EQ(d.probs[1], 0.0);
  EXPECT_EQ(d.probs[2], 0.0);
  EXPECT_NEAR(d.entropy_nats, 0.0, 1e-12);
  EXPECT_TRUE(d.reduced_support);
  EXPECT_EQ(d.support, (std::vector<std::size_t>{0}));
}

TEST(FitMaxent, InteriorFaceOfTheMomentPolytope) {
  // E[x] = 1, E[x^2] = 1 on {0,1,2} forces p = (0, 1, 0).
  const auto f = mdl::build_moment_features(Alphabet({0, 1, 2}), 2);
  const auto d = mdl::fit_maxent(f, {{1.0, 1.0}});
  EXPECT_NEAR(d.probs[1], 1.0, 1e-12);
  EXPECT_TRUE(d.reduced_support);
}

TEST(FitMaxent, OutsidePolytopeIsInfeasible) {
  const auto f = mdl::build_moment_features(Alphabet({0, 1}), 1);
  try {
    mdl::fit_maxent(f, {{1.5}});
    FAIL() << "expected infeasible";
  } catch (const mdl::Error& e) {
    EXPECT_EQ(e.code(), mdl::ErrorCode::infeasible);
  }
  // E[x^2] < E[x]^2 is impossible.
  const auto f2 = mdl::build_moment_features(Alphabet({0, 1, 2}), 2);
  EXPECT_THROW(mdl::fit_maxent(f2, {{1.0, 0.5}}), mdl::Error);
}

TEST(FitMaxent, WrongMomentCountIsRejected) {
  const auto f = mdl::build_moment_features(Alphabet({0, 1, 2}), 2);
  EXPECT_THROW(mdl::fit_maxent(f, {{1.0}}), mdl::Error);
}

TEST(FitMaxent, MatchesGridSearchOverTheConstrainedSimplex) {
  const auto f = mdl::build_moment_features(Alphabet::integer_levels(5), 2);
  const auto d = mdl::fit_maxent(f, {{1.0, 2.0}});
  // Constraints leave (p3, p4) free: p2 = (1 - 6 p3 - 12 p4) / 2,
  // p1 = 1 - 3 p3 - 4 p4 - 2 p2, p0 = 1 - p1 - p2 - p3 - p4.
  double best = -1.0;
  const double step = 1e-3;
  for (double p3 = 0.0; p3 <= 1.0; p3 += step)
    for (double p4 = 0.0; p4 <= 1.0; p4 += step) {
      const double p2 = (1.0 - 6.0 * p3 - 12.0 * p4) / 2.0;
      const double p1 = 1.0 - 3.0 * p3 - 4.0 * p4 - 2.0 * p2;
      const double p0 = 1.0 - p1 - p2 - p3 - p4;
      if (p0 < 0 || p1 < 0 || p2 < 0) continue;
      best = std::max(best, oracle::entropy({p0, p1, p2, p3, p4}));
    }
  ASSERT_GT(best, 0.0);
  EXPECT_GE(d.entropy_nats, best - 1e-12);
  EXPECT_LE(d.entropy_nats - best, 1e-4);
}

TEST(FitMaxent, BeatsEveryFeasiblePerturbation) {
  // Random directions in the null space of the constraints keep the moments;
  // none may raise the entropy.
  std::mt19937_64 rng(11);
  const auto f = mdl::build_moment_features(Alphabet::integer_levels(6), 2);
  const auto p = oracle::dirichlet(rng, 6, 0.2);
  const auto d = mdl::fit_maxent(f, moments_of(f, p));
  std::normal_distribution<double> g;
  for (int rep = 0; rep < 2000; ++rep) {
    std::vector<double> v(6);
    for (auto& x : v) x = g(rng);
    // Project out span{1, x, x^2} by Gram-Schmidt.
    std::vector<std::vector<double>> basis;
    for (int k = 0; k < 3; ++k) {
      std::vector<double> b(6);
      for (int j = 0; j < 6; ++j) b[j] = std::pow(static_cast<double>(j), k);
      for (const auto& q : basis) {
        double dot = 0;
        for (int j = 0; j < 6; ++j) dot += b[j] * q[j];
        for (int j = 0; j < 6; ++j) b[j] -= dot * q[j];
      }
      double nrm = 0;
      for (double x : b) nrm += x * x;
      for (auto& x : b) x /= std::sqrt(nrm);
      basis.push_back(b);
    }
    for (const auto& q : basis) {
      double dot = 0;
      for (int j = 0; j < 6; ++j) dot += v[j] * q[j];
      for (int j = 0; j < 6; ++j) v[j] -= dot * q[j];
    }
    const double t = 0.01 * std::uniform_real_distribution<double>(0.01, 1.0)(rng);
    std::vector<double> q(6);
    bool ok = true;
    for (int j = 0; j < 6; ++j) {
      q[j] = d.probs[j] + t * v[j];
      ok = ok && q[j] >= 0.0;
    }
    if (!ok) continue;
    EXPECT_LE(oracle::entropy(q), d.entropy_nats + 1e-12);
  }
}

TEST(FitMaxent, InteriorResidualsOnRandomInstances) {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t k = 2 + rep % 7;
    const std::size_t m = 1 + rep % (k - 1);
    const auto f = mdl::build_moment_features(Alphabet::integer_levels(k), m);
    const auto p = oracle::dirichlet(rng, k, 0.05);
    const auto target = moments_of(f, p);
    const auto d = mdl::fit_maxent(f, target);
    const auto got = moments_of(f, d.probs);
    for (std::size_t j = 0; j < m; ++j)
      EXPECT_NEAR(got.means[j], target.means[j], 1e-8 * std::max(1.0, std::abs(target.means[j])));
  }
}

TEST(FitMaxent, SaturatedFitIsTheEmpiricalType) {
  std::mt19937_64 rng(9);
  for (std::size_t k = 2; k <= 5; ++k) {
    std::vector<std::size_t> idx(17);
    for (auto& v : idx) v = std::uniform_int_distribution<std::size_t>(0, k - 1)(rng);
    const Sample s(idx, k);
    for (const auto& f : {mdl::build_moment_features(Alphabet::integer_levels(k), k - 1),
                          mdl::build_indicator_features(k)}) {
      const auto d = mdl::fit_maxent(f, mdl::empirical_moments(s, f));
      const auto c = s.counts();
      for (std::size_t j = 0; j < k; ++j) EXPECT_NEAR(d.probs[j], c[j] / 17.0, 1e-9);
    }
  }
}

TEST(FitMaxent, NestedFeaturesNeverRaiseEntropy) {
  std::mt19937_64 rng(21);
  for (int rep = 0; rep < 40; ++rep) {
    const std::size_t k = 3 + rep % 4;
    std::vector<std::size_t> idx(12);
    for (auto& v : idx) v = std::uniform_int_distribution<std::size_t>(0, k - 1)(rng);
    const Sample s(idx, k);
    const auto full = mdl::build_moment_features(Alphabet::integer_levels(k), k - 1);
    double prev = std::log(static_cast<double>(k));
    for (std::size_t m = 1; m < k; ++m) {
      const auto f = full.prefix(m);
      const double h = mdl::fit_maxent(f, mdl::empirical_moments(s, f)).entropy_nats;
      EXPECT_LE(h, prev + 1e-10);
      prev = h;
    }
  }
}

TEST(Entropy, ClosedForms) {
  mdl::MaxEntDistribution d;
  d.probs.assign(5, 0.2);
  EXPECT_NEAR(mdl::entropy(d), std::log(5.0), 1e-12);
  d.probs = {1.0, 0.0};
  EXPECT_EQ(mdl::entropy(d), 0.0);
  d.probs = {0.75, 0.25};
  EXPECT_NEAR(mdl::entropy(d), -(0.75 * std::log(0.75) + 0.25 * std::log(0.25)), 1e-15);
}

TEST(LogLikelihood, DirectEvaluation) {
  mdl::MaxEntDistribution d;
  d.probs = {0.5, 0.5};
  EXPECT_NEAR(mdl::log_likelihood(d, Sample({0, 1, 1, 0}, 2)).nats, -4.0 * std::log(2.0), 1e-12);
  d.probs = {1.0, 0.0};
  EXPECT_EQ(mdl::log_likelihood(d, Sample({0, 0}, 2)).nats, 0.0);
  const auto zero = mdl::log_likelihood(d, Sample({0, 1}, 2));
  EXPECT_TRUE(zero.zero_probability);
  EXPECT_EQ(zero.nats, -std::numeric_limits<double>::infinity());
  d.probs = {0.75, 0.25};
  EXPECT_NEAR(mdl::log_likelihood(d, Sample({0, 0, 0, 1}, 2)).nats, 3 * std::log(0.75) + std::log(0.25), 1e-12);
}

TEST(LogLikelihood, EqualsMinusNTimesEntropyAtTheFit) {
  std::mt19937_64 rng(2);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t k = 3 + rep % 4, n = 25;
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i < k ? i : std::uniform_int_distribution<std::size_t>(0, k - 1)(rng);
    const Sample s(idx, k);
    const auto f = mdl::build_moment_features(Alphabet::integer_levels(k), 1 + rep % (k - 1));
    const auto d = mdl::fit_maxent(f, mdl::empirical_moments(s, f));
    EXPECT_NEAR(mdl::log_likelihood(d, s).nats, -static_cast<double>(n) * d.entropy_nats, 1e-8);
  }
}

TEST(DualGradient, MatchesCentralDifferences) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g(0.0, 0.3);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t k = 3 + rep % 5, m = 1 + rep % 3;
    const auto f = mdl::build_moment_features(Alphabet::integer_levels(k), std::min(m, k - 1));
    const auto target = moments_of(f, oracle::dirichlet(rng, k, 0.1));
    std::vector<double> lam(f.cols());
    for (auto& v : lam) v = g(rng);
    const auto grad = mdl::dual_gradient(f, target, lam);
    for (std::size_t i = 0; i < lam.size(); ++i) {
      auto hi = lam, lo = lam;
      hi[i] += 1e-6;
      lo[i] -= 1e-6;
      const double fd = (mdl::dual_objective(f, target, hi) - mdl::dual_objective(f, target, lo)) / 2e-6;
      EXPECT_NEAR(grad[i], fd, 1e-5 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST(DualObjective, MinimumIsTheMaximumEntropy) {
  const auto f = mdl::build_moment_features(Alphabet::integer_levels(4), 2);
  const MomentVector target{{1.2, 2.3}};
  const auto d = mdl::fit_maxent(f, target);
  const std::vector<double> lam(d.lambdas.begin() + 1, d.lambdas.end());
  EXPECT_NEAR(mdl::dual_objective(f, target, lam), d.entropy_nats, 1e-10);
  for (double v : mdl::dual_gradient(f, target, lam)) EXPECT_NEAR(v, 0.0, 1e-9);
}

TEST(DualSolver, WarmStartAgreesWithColdStarts) {
  const auto f = mdl::build_moment_features(Alphabet::integer_levels(5), 3);
  const auto family = mdl::make_generative_family(f, 10.0);
  mdl::SolverOptions warm;
  warm.warm_start = true;
  mdl::DualSolver hot(family, warm), cold(family);
  mdl::CompositionRange r(10, 5);
  do {
    std::vector<double> c(r.current().begin(), r.current().end());
    EXPECT_NEAR(hot.min_weighted_entropy(c), cold.min_weighted_entropy(c), 1e-9);
  } while (r.next());
}

TEST(DualSolver, LambdasReproduceProbabilities) {
  const auto f = mdl::build_moment_features(Alphabet::integer_levels(5), 2);
  const auto d = mdl::fit_maxent(f, {{1.7, 4.1}});
  for (std::size_t j = 0; j < 5; ++j) {
    double e = d.lambdas[0];
    for (std::size_t k = 0; k < 2; ++k) e += d.lambdas[k + 1] * f(j, k);
    EXPECT_NEAR(std::exp(-e), d.probs[j], 1e-12);
  }
}

}  // namespace
