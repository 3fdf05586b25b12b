#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mdl/alphabet.hpp"
#include "mdl/dual_solver.hpp"
#include "mdl/features.hpp"

namespace mdl {

enum class CompMethod { exact_enum, type_class, monte_carlo };

const char* to_string(CompMethod method) noexcept;
std::optional<CompMethod> parse_comp_method(std::string_view name) noexcept;

struct CompOptions {
  // Largest number of sequences the enumeration oracles will visit.
  std::uint64_t enum_cap = 1'000'000;
  // Largest number of type classes (or label-count groups) visited exactly.
  double type_cap = 1e8;
  std::size_t mc_draws = 10'000;
  std::uint64_t seed = 0;
  SolverOptions solver{};
};

// Codelengths in nats. nml_nats = err_nats + comp_nats.
struct CodelengthReport {
  double err_nats = 0.0;
  double comp_nats = 0.0;
  double nml_nats = 0.0;
  CompMethod method = CompMethod::type_class;
  std::optional<double> mc_stderr_nats;
};

CodelengthReport make_report(double err_nats, double comp_nats, CompMethod method,
                             std::optional<double> mc_stderr_nats = std::nullopt);

// A composition of n over the alphabet with its log multinomial coefficient.
struct TypeClass {
  std::vector<std::size_t> counts;
  double log_multiplicity = 0.0;

  static TypeClass of(std::vector<std::size_t> counts);
};

// n * H(p*) for the maximum-entropy fit to the sample's empirical moments.
double err_codelength(const FeatureTable& features, const Sample& sample, const SolverOptions& options = {});

// ln sum over all K^n sequences of exp(-n H(p*_y)), fitting every sequence
// from scratch. Oracle only; refuses with ErrorCode::cap_exceeded past enum_cap.
double comp_exact_enum(const FeatureTable& features, const Alphabet& alphabet, std::size_t n,
                       const CompOptions& options = {});

// The same sum grouped by type class: ln sum_t exp(ln |T_t| - n H(p*_t)).
double comp_by_types(const FeatureTable& features, const Alphabet& alphabet, std::size_t n,
                     const CompOptions& options = {});

struct MonteCarloEstimate {
  double comp_nats = 0.0;
  double stderr_nats = 0.0;
  std::size_t draws = 0;
};

// Importance estimate under uniform i.i.d. sequences:
// COMP ~ ln(K^n * mean exp(-n H(p*_y))), with a delta-method standard error.
MonteCarloEstimate comp_monte_carlo(const FeatureTable& features, const Alphabet& alphabet, std::size_t n,
                                    std::size_t draws, std::uint64_t seed, const SolverOptions& options = {});

CodelengthReport nml_codelength(const FeatureTable& features, const Sample& sample, CompMethod method,
                                const CompOptions& options = {});

// Uniform index in [0, bound) from a 64-bit engine output stream; defined
// here so that Monte-Carlo draws do not depend on the standard library's
// distribution implementations.
template <typename Engine>
std::size_t uniform_index(Engine& engine, std::size_t bound) {
  const std::uint64_t b = bound;
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % b);
  std::uint64_t x;
  do {
    x = engine();
  } while (x >= limit);
  return static_cast<std::size_t>(x % b);
}

}  // namespace mdl
