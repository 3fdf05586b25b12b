#include "mdl/pipeline/gene_selection.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "mdl/error.hpp"

namespace mdl {

std::vector<std::size_t> GeneSelectionConfig::m_values() const {
  if (m_min > m_max) throw Error(ErrorCode::invalid_argument, "m range is empty");
  std::vector<std::size_t> ms;
  if (include_m0 && m_min > 0) ms.push_back(0);
  for (std::size_t m = m_min; m <= m_max; ++m) ms.push_back(m);
  return ms;
}

CondCompResult ComplexityMemo::get(const CondFeatureTable& features, const Sample& x_sample, std::size_t m,
                                   const GeneSelectionConfig& config) {
  Key key{x_sample.counts(), m, features.classes()};
  {
    std::lock_guard lock(mutex_);
    const auto it = table_.find(key);
    if (it != table_.end()) return it->second;
  }
  // Computed outside the lock; a concurrent duplicate yields the same value.
  const CondCompResult r = cond_comp_grouped(features, x_sample, config.comp);
  std::lock_guard lock(mutex_);
  table_.emplace(std::move(key), r);
  return r;
}

std::size_t ComplexityMemo::size() const {
  std::lock_guard lock(mutex_);
  return table_.size();
}

GeneSelection select_m_for_gene(const Sample& x_sample, std::span<const std::size_t> labels, std::size_t classes,
                                const GeneSelectionConfig& config, ComplexityMemo* memo) {
  const Alphabet alphabet = Alphabet::integer_levels(x_sample.alphabet_size());
  const ClassSet class_set = ClassSet::numbered(classes);
  GeneSelection sel;
  sel.levels = x_sample.alphabet_size();
  sel.min_nml_nats = std::numeric_limits<double>::infinity();
  const bool use_memo = memo && config.method == CompMethod::type_class && config.intercept;
  for (std::size_t m : config.m_values()) {
    MPoint point;
    point.m = m;
    try {
      const auto features = build_cond_moment_features(alphabet, class_set, m, config.intercept);
      if (use_memo) {
        const double err = cond_err_codelength(features, x_sample, labels, config.comp.solver);
        const auto comp = memo->get(features, x_sample, m, config);
        point.report = make_report(err, comp.comp_nats, comp.method, comp.stderr_nats);
      } else {
        point.report = cond_nml(features, x_sample, labels, config.method, config.comp);
      }
    } catch (const Error& e) {
      point.error = e.what();
    }
    sel.curve.push_back(std::move(point));
  }
  for (const auto& p : sel.curve)
    if (p.report && p.report->nml_nats < sel.min_nml_nats) sel.min_nml_nats = p.report->nml_nats;
  for (const auto& p : sel.curve)
    if (p.report && p.report->nml_nats <= sel.min_nml_nats + 1e-9) {
      sel.chosen_m = p.m;
      break;
    }
  return sel;
}

std::vector<GeneSelection> rank_genes(const QuantizedMatrix& matrix, const std::vector<std::string>& gene_ids,
                                      std::span<const std::size_t> columns, std::span<const std::size_t> labels,
                                      std::size_t classes, const GeneSelectionConfig& config, std::size_t workers,
                                      ComplexityMemo* memo) {
  if (gene_ids.size() != matrix.genes) throw Error(ErrorCode::invalid_argument, "gene id count does not match the matrix");
  if (labels.size() != columns.size())
    throw Error(ErrorCode::invalid_argument, "label count does not match the selected columns");
  ComplexityMemo local;
  if (!memo) memo = &local;
  std::vector<GeneSelection> out(matrix.genes);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    try {
      for (std::size_t g = next++; g < matrix.genes; g = next++) {
        const Sample x = matrix.sample(g, columns);
        GeneSelection sel = select_m_for_gene(x, labels, classes, config, memo);
        sel.gene_id = gene_ids[g];
        sel.gene_index = g;
        sel.constant = matrix.quantizers[g].constant;
        out[g] = std::move(sel);
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(1, matrix.genes));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  std::sort(out.begin(), out.end(), [](const GeneSelection& a, const GeneSelection& b) {
    if (a.min_nml_nats != b.min_nml_nats) return a.min_nml_nats < b.min_nml_nats;
    if (a.gene_id != b.gene_id) return a.gene_id < b.gene_id;
    return a.gene_index < b.gene_index;
  });
  return out;
}

}  // namespace mdl
