#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "mdl/dual_solver.hpp"

namespace mdl {

// Memoizes the minimized dual objective (n times the maximum entropy) keyed by
// the feature sums of the count vector, quantized to 12 decimal digits of the
// scaled per-unit moment. Count vectors that share moments share one fit.
// Fits are warm-started, so callers must visit counts in a fixed order.
class EntropyCache {
 public:
  EntropyCache(const LogLinearFamily& family, const SolverOptions& options);

  double operator()(std::span<const double> counts);

  std::size_t hits() const noexcept { return hits_; }
  std::size_t misses() const noexcept { return misses_; }

 private:
  struct KeyHash {
    std::size_t operator()(const std::vector<std::int64_t>& key) const noexcept;
  };

  const LogLinearFamily& family_;
  DualSolver solver_;
  std::unordered_map<std::vector<std::int64_t>, double, KeyHash> table_;
  std::vector<std::int64_t> key_;
  std::size_t hits_ = 0;
  std::size_t misses_ = 0;
};

}  // namespace mdl
