#include <gtest/gtest.h>

#include <algorithm>
#include <memory>

#include "mdl/pipeline/gene_selection.hpp"
#include "mdl/pipeline/sweep.hpp"
#include "mdl/pipeline/synthetic.hpp"

namespace {

mdl::ExpressionMatrix small_data(std::uint64_t seed) {
  mdl::SyntheticConfig c;
  c.informative = 6;
  c.noise = 10;
  c.seed = seed;
  return mdl::make_synthetic(c).matrix;
}

mdl::ExperimentConfig quick() {
  mdl::ExperimentConfig e;
  e.selection.m_max = 3;
  return e;
}

TEST(Partition, UsesTheTestSplitWhenPresent) {
  const auto m = small_data(1);
  const auto p = mdl::partition(m);
  EXPECT_TRUE(p.eval_is_test);
  EXPECT_EQ(p.train.size(), 38u);
  EXPECT_EQ(p.eval.size(), 34u);
  EXPECT_EQ(std::count(p.train_labels.begin(), p.train_labels.end(), 1u), 11);
  auto train_only = m;
  std::fill(train_only.split.begin(), train_only.split.end(), mdl::Split::train);
  const auto q = mdl::partition(train_only);
  EXPECT_FALSE(q.eval_is_test);
  EXPECT_EQ(q.eval, q.train);
}

TEST(Sweep, RowsAgreeWithAnIndependentRanking) {
  const auto m = small_data(2);
  const auto cfg = quick();
  const auto r = mdl::run_quantization_sweep(m, {2, 3, 4}, 4, cfg);
  ASSERT_EQ(r.rows.size(), 3u);
  const auto p = mdl::partition(m);
  for (const auto& row : r.rows) {
    const auto q = mdl::quantize_matrix(m, row.levels, cfg.quantize);
    const auto ranked = mdl::rank_genes(q, m.gene_ids, p.train, p.train_labels, 2, cfg.selection);
    double sum = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
      sum += ranked[i].min_nml_nats;
      EXPECT_EQ(row.top_genes[i], ranked[i].gene_id);
    }
    EXPECT_NEAR(row.mean_nml_nats, sum / 4.0, 1e-12);
    EXPECT_EQ(row.total, 34u);
    EXPECT_NEAR(row.accuracy, static_cast<double>(row.correct) / 34.0, 1e-15);
  }
}

TEST(Sweep, ExtremaAreConsistent) {
  const auto r = mdl::run_quantization_sweep(small_data(3), {2, 3, 5}, 3, quick());
  double best_nml = 1e300, best_acc = -1.0;
  for (const auto& row : r.rows) {
    best_nml = std::min(best_nml, row.mean_nml_nats);
    best_acc = std::max(best_acc, row.accuracy);
  }
  const auto at = [&](std::size_t k) {
    return *std::find_if(r.rows.begin(), r.rows.end(), [&](const auto& row) { return row.levels == k; });
  };
  EXPECT_EQ(at(r.nml_argmin_levels).mean_nml_nats, best_nml);
  ASSERT_FALSE(r.accuracy_argmax_levels.empty());
  for (auto k : r.accuracy_argmax_levels) EXPECT_EQ(at(k).accuracy, best_acc);
  const bool co = std::find(r.accuracy_argmax_levels.begin(), r.accuracy_argmax_levels.end(), r.nml_argmin_levels) !=
                  r.accuracy_argmax_levels.end();
  EXPECT_EQ(r.co_extremum, co);
}

TEST(Sweep, DeterministicAcrossWorkersAndMemo) {
  const auto m = small_data(4);
  auto a = quick();
  auto b = quick();
  b.workers = 3;
  b.memo = std::make_shared<mdl::ComplexityMemo>();
  const auto x = mdl::run_quantization_sweep(m, {2, 4}, 5, a);
  const auto y = mdl::run_quantization_sweep(m, {2, 4}, 5, b);
  const auto z = mdl::run_quantization_sweep(m, {2, 4}, 5, b);
  for (std::size_t i = 0; i < x.rows.size(); ++i) {
    EXPECT_EQ(x.rows[i].mean_nml_nats, y.rows[i].mean_nml_nats);
    EXPECT_EQ(y.rows[i].mean_nml_nats, z.rows[i].mean_nml_nats);
    EXPECT_EQ(x.rows[i].top_genes, y.rows[i].top_genes);
    EXPECT_EQ(x.rows[i].correct, y.rows[i].correct);
  }
}

TEST(Sweep, TestValuesDoNotMoveTheRanking) {
  auto m = small_data(5);
  const auto before = mdl::run_quantization_sweep(m, {3}, 4, quick());
  for (std::size_t g = 0; g < m.genes(); ++g)
    for (std::size_t s = 0; s < m.samples(); ++s)
      if (m.split[s] == mdl::Split::test) m.values[g * m.samples() + s] *= 1.7;
  const auto after = mdl::run_quantization_sweep(m, {3}, 4, quick());
  EXPECT_EQ(before.rows[0].top_genes, after.rows[0].top_genes);
  EXPECT_EQ(before.rows[0].mean_nml_nats, after.rows[0].mean_nml_nats);
}

TEST(Curve, OneRowPerGeneCount) {
  const auto c = mdl::run_classifier_curve(small_data(6), 4, 5, {1, 2}, quick());
  EXPECT_EQ(c.levels, 4u);
  ASSERT_EQ(c.rows.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(c.rows[i].genes, i + 1);
    EXPECT_EQ(c.rows[i].fixed_accuracy.size(), 2u);
    EXPECT_GE(c.rows[i].nml_accuracy, 0.0);
    EXPECT_LE(c.rows[i].nml_accuracy, 1.0);
  }
}

TEST(Synthetic, DeterministicInTheSeed) {
  const auto a = small_data(9);
  const auto b = small_data(9);
  const auto c = small_data(10);
  EXPECT_EQ(a.values, b.values);
  EXPECT_NE(a.values, c.values);
  EXPECT_EQ(a.samples(), 72u);
  EXPECT_EQ(a.genes(), 16u);
  EXPECT_EQ(a.class_labels, (std::vector<std::string>{"c0", "c1"}));
}

}  // namespace
