#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "mdl/numeric.hpp"
#include "oracles.hpp"

namespace {

TEST(LogSumExp, MatchesDirectSumOnModerateTerms) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> t(1 + rep % 9);
    double direct = 0.0;
    for (auto& v : t) {
      v = u(rng);
      direct += std::exp(v);
    }
    EXPECT_NEAR(mdl::log_sum_exp(t), std::log(direct), 1e-12 * std::abs(std::log(direct)) + 1e-12);
  }
}

TEST(LogSumExp, SurvivesTermsThatOverflowExp) {
  const std::vector<double> t{1000.0, 1000.0};
  EXPECT_NEAR(mdl::log_sum_exp(t), 1000.0 + std::log(2.0), 1e-12);
  const std::vector<double> low{-1000.0, -1001.0};
  EXPECT_NEAR(mdl::log_sum_exp(low), -1000.0 + std::log1p(std::exp(-1.0)), 1e-12);
}

TEST(LogSumExp, EmptyGivesMinusInfinity) {
  mdl::LogSumExp acc;
  EXPECT_TRUE(acc.empty());
  EXPECT_EQ(acc.value(), -std::numeric_limits<double>::infinity());
  acc.add(-std::numeric_limits<double>::infinity());
  EXPECT_TRUE(acc.empty());
}

TEST(LogSumExp, MergeEqualsSequentialAdd) {
  mdl::LogSumExp a, b, all;
  for (int i = 0; i < 10; ++i) {
    const double v = std::sin(i) * 30.0;
    (i < 4 ? a : b).add(v);
    all.add(v);
  }
  a.merge(b);
  EXPECT_NEAR(a.value(), all.value(), 1e-12);
}

TEST(LogFactorial, MatchesLgamma) {
  const auto t = mdl::log_factorial_table(60);
  for (std::size_t k = 0; k <= 60; ++k) EXPECT_NEAR(t[k], std::lgamma(k + 1.0), 1e-10);
}

TEST(LogMultinomial, MatchesLgamma) {
  const auto t = mdl::log_factorial_table(38);
  const std::vector<std::size_t> c{10, 0, 17, 11};
  const double want = std::lgamma(39.0) - std::lgamma(11.0) - std::lgamma(18.0) - std::lgamma(12.0);
  EXPECT_NEAR(mdl::log_multinomial(c, t), want, 1e-9);
}

TEST(Compositions, CountMatchesEnumeration) {
  for (std::size_t n = 0; n <= 9; ++n)
    for (std::size_t k = 1; k <= 5; ++k) {
      std::size_t seen = 0;
      mdl::CompositionRange r(n, k);
      std::vector<std::size_t> prev;
      do {
        std::size_t sum = 0;
        for (auto v : r.current()) sum += v;
        ASSERT_EQ(sum, n);
        if (!prev.empty()) {
          ASSERT_TRUE(r.current() > prev) << "not lexicographic";
        }
        prev = r.current();
        ++seen;
      } while (r.next());
      EXPECT_EQ(static_cast<double>(seen), mdl::count_compositions(n, k));
      std::size_t oracle_count = 0;
      oracle::for_each_composition(n, k, [&](const std::vector<std::size_t>&) { ++oracle_count; });
      EXPECT_EQ(seen, oracle_count);
    }
}

TEST(Compositions, FirstAndLast) {
  mdl::CompositionRange r(4, 3);
  EXPECT_EQ(r.current(), (std::vector<std::size_t>{0, 0, 4}));
  std::vector<std::size_t> last;
  do last = r.current();
  while (r.next());
  EXPECT_EQ(last, (std::vector<std::size_t>{4, 0, 0}));
}

TEST(Binomial, SmallValues) {
  EXPECT_EQ(mdl::binomial(5, 2), 10.0);
  EXPECT_EQ(mdl::binomial(42, 4), 111930.0);
  EXPECT_EQ(mdl::binomial(3, 5), 0.0);
}

TEST(EntropyOf, ZeroTimesLogZeroIsZero) {
  const std::vector<double> p{0.75, 0.25, 0.0};
  EXPECT_NEAR(mdl::entropy_of(p), 0.5623351446188083, 1e-12);
  const std::vector<double> point{1.0, 0.0};
  EXPECT_EQ(mdl::entropy_of(point), 0.0);
}

TEST(Fnv1a, PublishedVectors) {
  auto h = [](const std::string& s) {
    return mdl::fnv1a64({reinterpret_cast<const unsigned char*>(s.data()), s.size()});
  };
  EXPECT_EQ(h(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(h("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(h("foobar"), 0x85944171f73967e8ULL);
}

}  // namespace
