#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mdl/alphabet.hpp"
#include "mdl/codelength.hpp"
#include "mdl/conditional.hpp"
#include "mdl/features.hpp"

namespace mdl {

enum class Criterion { nml, minimax };

const char* to_string(Criterion criterion) noexcept;

struct Candidate {
  std::string id;
  FeatureTable features;
};

struct CondCandidate {
  std::string id;
  CondFeatureTable features;
};

// One row of the per-candidate table. `score` is the selection criterion in
// nats: NML, or for minimax n times the maximum entropy (so that ties are
// judged on the same scale under both criteria).
struct CandidateOutcome {
  std::string id;
  std::size_t num_features = 0;
  std::optional<CodelengthReport> report;
  std::optional<double> entropy_nats;
  std::optional<double> score;
  std::string error;
};

struct SelectionResult {
  Criterion criterion = Criterion::nml;
  std::vector<CandidateOutcome> rows;
  std::size_t chosen = 0;  // index into rows

  const std::string& chosen_id() const { return rows.at(chosen).id; }
};

// Index of the row with the smallest score. Scores within `tie_tol` nats of
// the minimum tie; ties go to fewer features, then the lexicographically
// smaller id. Rows without a score are skipped.
std::size_t choose_candidate(std::span<const CandidateOutcome> rows, double tie_tol = 1e-9);

// argmin over candidates of the NML codelength. When `forced_comp` is set,
// every candidate is charged that complexity instead of its own (which is
// then not computed). Throws ErrorCode::empty_result listing every cause if
// no candidate could be evaluated.
SelectionResult select_by_nml(std::span<const Candidate> candidates, const Sample& sample, CompMethod method,
                              const CompOptions& options = {}, std::optional<double> forced_comp = std::nullopt);

// argmin over candidates of the fitted maximum entropy; no complexity term.
SelectionResult select_by_minimax(std::span<const Candidate> candidates, const Sample& sample,
                                  const SolverOptions& options = {});

// Conditional NML selection for labels given a quantized covariate.
SelectionResult select_by_cond_nml(std::span<const CondCandidate> candidates, const Sample& x_sample,
                                   std::span<const std::size_t> labels, CompMethod method,
                                   const CompOptions& options = {});

}  // namespace mdl
