#include <benchmark/benchmark.h>

#include <memory>

#include "mdl/pipeline/gene_selection.hpp"
#include "mdl/pipeline/sweep.hpp"
#include "mdl/pipeline/synthetic.hpp"

namespace {

struct Data {
  mdl::ExpressionMatrix matrix;
  mdl::QuantizedMatrix quantized;
  mdl::Partition split;

  explicit Data(std::size_t noise) {
    mdl::SyntheticConfig c;
    c.noise = noise;
    mdl::PreprocessOptions p;
    p.filter = false;
    matrix = mdl::preprocess(mdl::make_synthetic(c).matrix, p);
    quantized = mdl::quantize_matrix(matrix, 5, mdl::QuantizeMethod::quantile);
    split = mdl::partition(matrix);
  }
};

// One gene, m = 1..7, no memo.
void BM_SelectMColdGene(benchmark::State& state) {
  const Data d(0);
  const mdl::GeneSelectionConfig c;
  const auto x = d.quantized.sample(0, d.split.train);
  for (auto _ : state) benchmark::DoNotOptimize(mdl::select_m_for_gene(x, d.split.train_labels, 2, c));
}
BENCHMARK(BM_SelectMColdGene)->Unit(benchmark::kMillisecond);

void BM_RankGenes(benchmark::State& state) {
  const Data d(state.range(0));
  const mdl::GeneSelectionConfig c;
  for (auto _ : state) {
    mdl::ComplexityMemo memo;
    benchmark::DoNotOptimize(mdl::rank_genes(d.quantized, d.matrix.gene_ids, d.split.train, d.split.train_labels, 2,
                                             c, 1, &memo));
  }
}
BENCHMARK(BM_RankGenes)->Arg(70)->Arg(970)->Unit(benchmark::kMillisecond);

void BM_QuantizationSweep(benchmark::State& state) {
  const Data d(70);
  mdl::ExperimentConfig e;
  e.selection.m_max = 4;
  for (auto _ : state) {
    e.memo = std::make_shared<mdl::ComplexityMemo>();
    benchmark::DoNotOptimize(mdl::run_quantization_sweep(d.matrix, {2, 3, 4, 5}, 25, e));
  }
}
BENCHMARK(BM_QuantizationSweep)->Unit(benchmark::kMillisecond);

}  // namespace
