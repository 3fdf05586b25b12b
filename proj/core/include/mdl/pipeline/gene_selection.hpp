#pragma once

#include <cstddef>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mdl/codelength.hpp"
#include "mdl/conditional.hpp"
#include "mdl/pipeline/quantize.hpp"

namespace mdl {

struct GeneSelectionConfig {
  std::size_t m_min = 1;
  std::size_t m_max = 7;
  bool include_m0 = false;  // adds the intercept-only baseline to the sweep
  bool intercept = true;
  CompMethod method = CompMethod::type_class;
  CompOptions comp{};

  std::vector<std::size_t> m_values() const;
};

struct MPoint {
  std::size_t m = 0;
  std::optional<CodelengthReport> report;
  std::string error;
};

struct GeneSelection {
  std::string gene_id;
  std::size_t gene_index = 0;
  std::size_t levels = 0;
  bool constant = false;
  std::vector<MPoint> curve;
  // Unset when every m failed; min_nml_nats is then +inf.
  std::optional<std::size_t> chosen_m;
  double min_nml_nats = 0.0;
};

// Conditional COMP depends on the covariate only through its level counts,
// so genes with the same counts share one computation. One memo serves one
// configuration. Safe for concurrent use.
class ComplexityMemo {
 public:
  CondCompResult get(const CondFeatureTable& features, const Sample& x_sample, std::size_t m,
                     const GeneSelectionConfig& config);

  std::size_t size() const;

 private:
  struct Key {
    std::vector<std::size_t> counts;
    std::size_t m;
    std::size_t classes;
    bool operator<(const Key& o) const {
      if (m != o.m) return m < o.m;
      if (classes != o.classes) return classes < o.classes;
      return counts < o.counts;
    }
  };
  mutable std::mutex mutex_;
  std::map<Key, CondCompResult> table_;
};

// Conditional NML of the labels given the gene for every m in the sweep;
// chosen_m is the smallest m attaining the minimum within 1e-9 nats.
GeneSelection select_m_for_gene(const Sample& x_sample, std::span<const std::size_t> labels, std::size_t classes,
                                const GeneSelectionConfig& config, ComplexityMemo* memo = nullptr);

// Selects m for every gene on the given columns and sorts by (min NML, gene
// id). `workers` threads share the genes; results do not depend on it.
std::vector<GeneSelection> rank_genes(const QuantizedMatrix& matrix, const std::vector<std::string>& gene_ids,
                                      std::span<const std::size_t> columns, std::span<const std::size_t> labels,
                                      std::size_t classes, const GeneSelectionConfig& config,
                                      std::size_t workers = 1, ComplexityMemo* memo = nullptr);

}  // namespace mdl
