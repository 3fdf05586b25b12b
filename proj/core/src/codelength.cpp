#include "mdl/codelength.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "mdl/error.hpp"
#include "mdl/fit_cache.hpp"
#include "mdl/maxent.hpp"
#include "mdl/numeric.hpp"

namespace mdl {

const char* to_string(CompMethod method) noexcept {
  switch (method) {
    case CompMethod::exact_enum: return "exact-enum";
    case CompMethod::type_class: return "type-class";
    case CompMethod::monte_carlo: return "monte-carlo";
  }
  return "unknown";
}

std::optional<CompMethod> parse_comp_method(std::string_view name) noexcept {
  if (name == "exact" || name == "exact-enum") return CompMethod::exact_enum;
  if (name == "types" || name == "type-class" || name == "grouped") return CompMethod::type_class;
  if (name == "mc" || name == "monte-carlo") return CompMethod::monte_carlo;
  return std::nullopt;
}

CodelengthReport make_report(double err_nats, double comp_nats, CompMethod method,
                             std::optional<double> mc_stderr_nats) {
  CodelengthReport r;
  r.err_nats = err_nats;
  r.comp_nats = comp_nats;
  r.nml_nats = err_nats + comp_nats;
  r.method = method;
  r.mc_stderr_nats = mc_stderr_nats;
  return r;
}

TypeClass TypeClass::of(std::vector<std::size_t> counts) {
  std::size_t n = 0;
  for (std::size_t c : counts) n += c;
  const auto table = log_factorial_table(n);
  TypeClass t;
  t.log_multiplicity = log_multinomial(counts, table);
  t.counts = std::move(counts);
  return t;
}

namespace {

void check_alphabet(const FeatureTable& features, const Alphabet& alphabet, std::size_t n) {
  if (features.rows() != alphabet.size())
    throw Error(ErrorCode::invalid_argument, "feature table rows do not match the alphabet size");
  if (n == 0) throw Error(ErrorCode::invalid_argument, "sample size must be at least one");
}

// The model has no identifiable parameters: every fit is uniform and every
// term of the normalizer equals K^-n, so COMP is exactly zero.
bool unconstrained(const LogLinearFamily& family) { return family.rank() == 0; }

}  // namespace

double err_codelength(const FeatureTable& features, const Sample& sample, const SolverOptions& options) {
  if (sample.alphabet_size() != features.rows())
    throw Error(ErrorCode::invalid_argument, "sample alphabet does not match the feature table");
  const auto family = make_generative_family(features, static_cast<double>(sample.size()));
  DualSolver solver(family, options);
  const auto counts = sample.counts();
  std::vector<double> c(counts.begin(), counts.end());
  return solver.min_weighted_entropy(c);
}

double comp_exact_enum(const FeatureTable& features, const Alphabet& alphabet, std::size_t n,
                       const CompOptions& options) {
  check_alphabet(features, alphabet, n);
  const std::size_t K = alphabet.size();
  const double sequences = std::pow(static_cast<double>(K), static_cast<double>(n));
  if (sequences > static_cast<double>(options.enum_cap))
    throw Error(ErrorCode::cap_exceeded, "exact enumeration over " + std::to_string(K) + "^" + std::to_string(n) +
                                             " sequences exceeds the cap of " + std::to_string(options.enum_cap));
  const auto family = make_generative_family(features, static_cast<double>(n));
  if (unconstrained(family)) return 0.0;
  DualSolver solver(family, options.solver);

  std::vector<std::size_t> seq(n, 0);
  std::vector<double> counts(K, 0.0);
  counts[0] = static_cast<double>(n);
  LogSumExp acc;
  while (true) {
    acc.add(-solver.min_weighted_entropy(counts));
    std::size_t i = 0;
    while (i < n) {
      counts[seq[i]] -= 1.0;
      if (++seq[i] < K) {
        counts[seq[i]] += 1.0;
        break;
      }
      seq[i] = 0;
      counts[0] += 1.0;
      ++i;
    }
    if (i == n) break;
  }
  return acc.value();
}

double comp_by_types(const FeatureTable& features, const Alphabet& alphabet, std::size_t n,
                     const CompOptions& options) {
  check_alphabet(features, alphabet, n);
  const std::size_t K = alphabet.size();
  const double types = count_compositions(n, K);
  if (types > options.type_cap)
    throw Error(ErrorCode::cap_exceeded, std::to_string(static_cast<long double>(types)) +
                                             " type classes exceed the cap; use the monte-carlo method");
  const auto family = make_generative_family(features, static_cast<double>(n));
  if (unconstrained(family)) return 0.0;
  EntropyCache err(family, options.solver);
  const auto log_fact = log_factorial_table(n);

  CompositionRange range(n, K);
  std::vector<double> counts(K);
  LogSumExp acc;
  do {
    const auto& c = range.current();
    for (std::size_t j = 0; j < K; ++j) counts[j] = static_cast<double>(c[j]);
    acc.add(log_multinomial(c, log_fact) - err(counts));
  } while (range.next());
  return acc.value();
}

MonteCarloEstimate comp_monte_carlo(const FeatureTable& features, const Alphabet& alphabet, std::size_t n,
                                    std::size_t draws, std::uint64_t seed, const SolverOptions& options) {
  check_alphabet(features, alphabet, n);
  if (draws < 100) throw Error(ErrorCode::invalid_argument, "monte-carlo estimation needs at least 100 draws");
  const std::size_t K = alphabet.size();
  const auto family = make_generative_family(features, static_cast<double>(n));
  if (unconstrained(family)) return {0.0, 0.0, draws};
  EntropyCache err(family, options);

  std::mt19937_64 engine(seed);
  std::vector<double> log_terms(draws);
  std::vector<double> counts(K);
  for (std::size_t d = 0; d < draws; ++d) {
    std::fill(counts.begin(), counts.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) counts[uniform_index(engine, K)] += 1.0;
    log_terms[d] = -err(counts);
  }
  LogSumExp acc;
  double shift = -std::numeric_limits<double>::infinity();
  for (double t : log_terms) {
    acc.add(t);
    shift = std::max(shift, t);
  }
  const double nd = static_cast<double>(draws);
  double mean = 0.0;
  for (double t : log_terms) mean += std::exp(t - shift);
  mean /= nd;
  double var = 0.0;
  for (double t : log_terms) {
    const double dv = std::exp(t - shift) - mean;
    var += dv * dv;
  }
  var /= nd - 1.0;

  MonteCarloEstimate est;
  est.draws = draws;
  est.comp_nats = static_cast<double>(n) * std::log(static_cast<double>(K)) + acc.value() - std::log(nd);
  est.stderr_nats = std::sqrt(var / nd) / mean;
  return est;
}

CodelengthReport nml_codelength(const FeatureTable& features, const Sample& sample, CompMethod method,
                                const CompOptions& options) {
  const Alphabet alphabet = Alphabet::integer_levels(features.rows());
  const double err = err_codelength(features, sample, options.solver);
  switch (method) {
    case CompMethod::exact_enum:
      return make_report(err, comp_exact_enum(features, alphabet, sample.size(), options), method);
    case CompMethod::type_class:
      return make_report(err, comp_by_types(features, alphabet, sample.size(), options), method);
    case CompMethod::monte_carlo: {
      const auto est = comp_monte_carlo(features, alphabet, sample.size(), options.mc_draws, options.seed,
                                        options.solver);
      return make_report(err, est.comp_nats, method, est.stderr_nats);
    }
  }
  throw Error(ErrorCode::invalid_argument, "unknown complexity method");
}

}  // namespace mdl
