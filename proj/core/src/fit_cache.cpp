#include "mdl/fit_cache.hpp"

#include <cmath>

namespace mdl {

namespace {

SolverOptions warm(SolverOptions options) {
  options.warm_start = true;
  return options;
}

}  // namespace

EntropyCache::EntropyCache(const LogLinearFamily& family, const SolverOptions& options)
    : family_(family), solver_(family, warm(options)), key_(family.num_features(), 0) {}

std::size_t EntropyCache::KeyHash::operator()(const std::vector<std::int64_t>& key) const noexcept {
  std::uint64_t h = 14695981039346656037ULL;
  for (std::int64_t v : key) {
    h ^= static_cast<std::uint64_t>(v);
    h *= 1099511628211ULL;
    h ^= h >> 29;
  }
  return static_cast<std::size_t>(h);
}

double EntropyCache::operator()(std::span<const double> counts) {
  if (family_.saturated()) return solver_.min_weighted_entropy(counts);
  const std::size_t f = family_.num_features();
  const double w = family_.total_weight();
  std::fill(key_.begin(), key_.end(), 0);
  for (std::size_t k = 0; k < f; ++k) {
    double s = 0.0;
    for (std::size_t o = 0; o < family_.num_outcomes(); ++o)
      if (counts[o] != 0.0) s += counts[o] * family_.feature(o, k);
    key_[k] = std::llround(s / (w * family_.residual_scale(k)) * 1e12);
  }
  if (auto it = table_.find(key_); it != table_.end()) {
    ++hits_;
    return it->second;
  }
  ++misses_;
  const double h = solver_.min_weighted_entropy(counts);
  table_.emplace(key_, h);
  return h;
}

}  // namespace mdl
