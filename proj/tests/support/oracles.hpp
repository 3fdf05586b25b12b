#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's solvers.

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <random>
#include <vector>

namespace oracle {

inline double entropy(const std::vector<double>& p) {
  double h = 0.0;
  for (double v : p)
    if (v > 0.0) h -= v * std::log(v);
  return h;
}

inline double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

// Calls f(counts) for every composition of n into k parts.
inline void for_each_composition(std::size_t n, std::size_t k,
                                 const std::function<void(const std::vector<std::size_t>&)>& f) {
  std::vector<std::size_t> c(k, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t left) {
    if (pos + 1 == k) {
      c[pos] = left;
      f(c);
      return;
    }
    for (std::size_t v = 0; v <= left; ++v) {
      c[pos] = v;
      rec(pos + 1, left - v);
    }
  };
  rec(0, n);
}

// ln sum over types of n! / prod c! * prod (c/n)^c: the stochastic complexity
// of the full multinomial model.
inline double multinomial_complexity(std::size_t k, std::size_t n) {
  double acc = -std::numeric_limits<double>::infinity();
  const double dn = static_cast<double>(n);
  for_each_composition(n, k, [&](const std::vector<std::size_t>& c) {
    double t = std::lgamma(dn + 1.0);
    for (std::size_t v : c) {
      const double dv = static_cast<double>(v);
      t -= std::lgamma(dv + 1.0);
      if (v > 0) t += dv * std::log(dv / dn);
    }
    acc = log_add(acc, t);
  });
  return acc;
}

// Calls f(seq) for every sequence in {0..k-1}^n.
inline void for_each_sequence(std::size_t k, std::size_t n, const std::function<void(const std::vector<std::size_t>&)>& f) {
  std::vector<std::size_t> s(n, 0);
  while (true) {
    f(s);
    std::size_t i = 0;
    while (i < n && ++s[i] == k) s[i++] = 0;
    if (i == n) return;
  }
}

inline std::vector<double> dirichlet(std::mt19937_64& rng, std::size_t k, double floor = 0.0) {
  std::gamma_distribution<double> g(1.0, 1.0);
  std::vector<double> p(k);
  double t = 0.0;
  for (auto& v : p) {
    v = g(rng) + floor;
    t += v;
  }
  for (auto& v : p) v /= t;
  return p;
}

}  // namespace oracle
