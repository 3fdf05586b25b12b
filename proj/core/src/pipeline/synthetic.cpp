#include "mdl/pipeline/synthetic.hpp"

#include <cmath>
#include <algorithm>
#include <cstdio>
#include <random>
#include <string>

#include "mdl/error.hpp"

namespace mdl {

namespace {

// Engine-only sampling so that data do not depend on the standard library's
// distribution implementations.
class Draws {
 public:
  explicit Draws(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double normal() {
    double u = uniform();
    while (u == 0.0) u = uniform();
    const double v = uniform();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586 * v);
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform() * static_cast<double>(i));
      std::swap(v[i - 1], v[j < i ? j : i - 1]);
    }
  }

  std::size_t categorical(const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double u = uniform() * total;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
      if (u < weights[i]) return i;
      u -= weights[i];
    }
    return weights.size() - 1;
  }

 private:
  std::mt19937_64 engine_;
};

std::string numbered(const char* prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%04zu", prefix, i);
  return buf;
}

}  // namespace

SyntheticData make_synthetic(const SyntheticConfig& config) {
  if (config.train_per_class.size() != 2 || config.test_per_class.size() != 2)
    throw Error(ErrorCode::invalid_argument, "the synthetic generator produces exactly two classes");
  if (config.states < 3) throw Error(ErrorCode::invalid_argument, "informative genes need at least three states");
  if (config.informative + config.noise == 0) throw Error(ErrorCode::invalid_argument, "no genes requested");

  SyntheticData out;
  ExpressionMatrix& m = out.matrix;
  m.class_labels = {"c0", "c1"};
  std::size_t id = 0;
  for (int part = 0; part < 2; ++part) {
    const auto& counts = part == 0 ? config.train_per_class : config.test_per_class;
    for (std::size_t c = 0; c < 2; ++c)
      for (std::size_t i = 0; i < counts[c]; ++i) {
        m.sample_ids.push_back(numbered("s", id++));
        m.labels.push_back(c);
        m.split.push_back(part == 0 ? Split::train : Split::test);
      }
  }
  const std::size_t n = m.samples();
  if (m.columns(Split::train).empty()) throw Error(ErrorCode::invalid_argument, "no train samples requested");

  // Train states are allocated exactly: the pool holds each state as often
  // as an equal-frequency binning into `states` levels would, class 1 takes
  // its share near the middle and class 0 the rest. Test states are drawn
  // from the implied class profiles.
  const std::size_t S = config.states;
  const double mid = 0.5 * static_cast<double>(S - 1);
  const std::size_t n_train = config.train_per_class[0] + config.train_per_class[1];
  if (n_train < S) throw Error(ErrorCode::invalid_argument, "fewer train samples than states");
  std::vector<std::size_t> pooled(S);
  for (std::size_t s = 0; s < S; ++s) pooled[s] = (s + 1) * n_train / S - s * n_train / S;

  std::vector<double> w_inner(S);
  double inner_total = 0.0;
  for (std::size_t s = 0; s < S; ++s) {
    const double d = std::abs(static_cast<double>(s) - mid) / mid;
    w_inner[s] = std::exp(-config.concentration * d * d);
    inner_total += w_inner[s];
  }
  // Largest-remainder allocation of class 1, capped by the pool.
  const std::size_t n1 = config.train_per_class[1];
  std::vector<std::size_t> inner(S);
  std::vector<double> remainder(S);
  std::size_t placed = 0;
  for (std::size_t s = 0; s < S; ++s) {
    const double share = static_cast<double>(n1) * w_inner[s] / inner_total;
    inner[s] = std::min(pooled[s], static_cast<std::size_t>(share));
    remainder[s] = share - static_cast<double>(inner[s]);
    placed += inner[s];
  }
  while (placed < n1) {
    std::size_t best = S;
    for (std::size_t s = 0; s < S; ++s)
      if (inner[s] < pooled[s] && (best == S || remainder[s] > remainder[best])) best = s;
    if (best == S) throw Error(ErrorCode::invalid_argument, "class 1 does not fit in the train pool");
    ++inner[best];
    remainder[best] -= 1.0;
    ++placed;
  }
  std::vector<double> w_outer(S), w_in(S);
  for (std::size_t s = 0; s < S; ++s) {
    w_outer[s] = static_cast<double>(pooled[s] - inner[s]);
    w_in[s] = static_cast<double>(inner[s]);
  }
  std::vector<std::vector<std::size_t>> train_states(2);
  for (std::size_t s = 0; s < S; ++s) {
    train_states[0].insert(train_states[0].end(), pooled[s] - inner[s], s);
    train_states[1].insert(train_states[1].end(), inner[s], s);
  }

  Draws rng(config.seed);
  for (std::size_t g = 0; g < config.informative; ++g) {
    m.gene_ids.push_back(numbered("inf", g));
    out.informative.push_back(1);
    const double center = 2.8 + 0.4 * rng.uniform();
    auto deck = train_states;
    for (auto& d : deck) rng.shuffle(d);
    std::size_t next[2] = {0, 0};
    for (std::size_t s = 0; s < n; ++s) {
      const std::size_t c = m.labels[s];
      const std::size_t state = m.split[s] == Split::train ? deck[c][next[c]++]
                                                           : rng.categorical(c == 0 ? w_outer : w_in);
      const double v = center + config.spacing * (static_cast<double>(state) - mid) + config.jitter * rng.normal();
      m.values.push_back(std::pow(10.0, v));
    }
  }
  for (std::size_t g = 0; g < config.noise; ++g) {
    m.gene_ids.push_back(numbered("noise", g));
    out.informative.push_back(0);
    const double center = 2.8 + 0.4 * rng.uniform();
    for (std::size_t s = 0; s < n; ++s) m.values.push_back(std::pow(10.0, center + config.noise_sd * rng.normal()));
  }
  validate(m);
  return out;
}

}  // namespace mdl
