#include "mdl/selection.hpp"

#include <cmath>
#include <set>

#include "mdl/error.hpp"
#include "mdl/maxent.hpp"

namespace mdl {

const char* to_string(Criterion criterion) noexcept {
  switch (criterion) {
    case Criterion::nml: return "nml";
    case Criterion::minimax: return "minimax";
  }
  return "unknown";
}

std::size_t choose_candidate(std::span<const CandidateOutcome> rows, double tie_tol) {
  std::optional<double> best;
  for (const auto& r : rows)
    if (r.score && (!best || *r.score < *best)) best = r.score;
  if (!best) throw Error(ErrorCode::empty_result, "no candidate has a score");
  std::optional<std::size_t> pick;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (!r.score || *r.score > *best + tie_tol) continue;
    if (!pick) {
      pick = i;
      continue;
    }
    const auto& p = rows[*pick];
    if (r.num_features < p.num_features || (r.num_features == p.num_features && r.id < p.id)) pick = i;
  }
  return *pick;
}

namespace {

template <typename C>
void check_ids(std::span<const C> candidates) {
  if (candidates.empty()) throw Error(ErrorCode::invalid_argument, "candidate set is empty");
  std::set<std::string> seen;
  for (const auto& c : candidates)
    if (!seen.insert(c.id).second) throw Error(ErrorCode::invalid_argument, "duplicate candidate id '" + c.id + "'");
}

SelectionResult finish(Criterion criterion, std::vector<CandidateOutcome> rows) {
  bool any = false;
  for (const auto& r : rows) any = any || r.score.has_value();
  if (!any) {
    std::string causes;
    for (const auto& r : rows) causes += "\n  " + r.id + ": " + r.error;
    throw Error(ErrorCode::empty_result, "every candidate failed:" + causes);
  }
  SelectionResult result;
  result.criterion = criterion;
  result.chosen = choose_candidate(rows);
  result.rows = std::move(rows);
  return result;
}

}  // namespace

SelectionResult select_by_nml(std::span<const Candidate> candidates, const Sample& sample, CompMethod method,
                              const CompOptions& options, std::optional<double> forced_comp) {
  check_ids(candidates);
  std::vector<CandidateOutcome> rows;
  for (const auto& c : candidates) {
    CandidateOutcome row;
    row.id = c.id;
    row.num_features = c.features.cols();
    try {
      if (forced_comp) {
        const double err = err_codelength(c.features, sample, options.solver);
        row.report = make_report(err, *forced_comp, method);
      } else {
        row.report = nml_codelength(c.features, sample, method, options);
      }
      row.entropy_nats = row.report->err_nats / static_cast<double>(sample.size());
      row.score = row.report->nml_nats;
    } catch (const Error& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return finish(Criterion::nml, std::move(rows));
}

SelectionResult select_by_minimax(std::span<const Candidate> candidates, const Sample& sample,
                                  const SolverOptions& options) {
  check_ids(candidates);
  std::vector<CandidateOutcome> rows;
  for (const auto& c : candidates) {
    CandidateOutcome row;
    row.id = c.id;
    row.num_features = c.features.cols();
    try {
      const double err = err_codelength(c.features, sample, options);
      row.entropy_nats = err / static_cast<double>(sample.size());
      row.score = err;
    } catch (const Error& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return finish(Criterion::minimax, std::move(rows));
}

SelectionResult select_by_cond_nml(std::span<const CondCandidate> candidates, const Sample& x_sample,
                                   std::span<const std::size_t> labels, CompMethod method,
                                   const CompOptions& options) {
  check_ids(candidates);
  std::vector<CandidateOutcome> rows;
  for (const auto& c : candidates) {
    CandidateOutcome row;
    row.id = c.id;
    row.num_features = c.features.features();
    try {
      row.report = cond_nml(c.features, x_sample, labels, method, options);
      row.entropy_nats = row.report->err_nats / static_cast<double>(x_sample.size());
      row.score = row.report->nml_nats;
    } catch (const Error& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return finish(Criterion::nml, std::move(rows));
}

}  // namespace mdl
