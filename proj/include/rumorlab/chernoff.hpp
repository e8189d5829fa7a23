#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "rumorlab/error.hpp"

namespace rumorlab {

struct GeoBound {
  double mu = 0.0;         // Σ 1/p_i
  double threshold = 0.0;  // 3(μ + t)
  double bound = 0.0;      // exp(-(p1/2) μ - p1 t)
};

namespace detail {

inline void check_geometric_params(std::span<const double> p, double t) {
  if (p.empty()) throw Error("bad-probabilities", "need at least one success probability");
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] > 0.0 && p[i] < 1.0)) throw Error("bad-probabilities", "p_i must lie in (0, 1)");
    if (i > 0 && p[i] < p[i - 1]) throw Error("bad-probabilities", "p_i must be sorted ascending");
  }
  if (!(t >= 0.0)) throw Error("bad-probabilities", "slack t must be >= 0");
}

}  // namespace detail

/// Tail bound for X = Σ X_i with independent X_i ~ Geom(p_i) on {1, 2, ...}:
/// Pr(X > 3(μ+t)) <= exp(-(p1/2) μ - p1 t).
inline GeoBound chernoff_geo_bound(std::span<const double> p, double t) {
  detail::check_geometric_params(p, t);
  GeoBound b;
  for (double pi : p) b.mu += 1.0 / pi;
  b.threshold = 3.0 * (b.mu + t);
  b.bound = std::exp(-(p.front() / 2.0) * b.mu - p.front() * t);
  return b;
}

/// Monte Carlo estimate of Pr(X > 3(μ+t)).
inline double chernoff_empirical_tail(std::span<const double> p, double t, std::uint64_t samples,
                                      std::uint64_t seed) {
  const GeoBound b = chernoff_geo_bound(p, t);
  if (samples == 0) throw Error("bad-config", "samples must be >= 1");
  std::mt19937_64 gen(seed);
  std::vector<std::geometric_distribution<std::uint64_t>> dists;
  for (double pi : p) dists.emplace_back(pi);
  std::uint64_t exceed = 0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    std::uint64_t x = 0;
    for (auto& d : dists) x += d(gen) + 1;  // failures before success, plus the success
    if (static_cast<double>(x) > b.threshold) ++exceed;
  }
  return static_cast<double>(exceed) / static_cast<double>(samples);
}

}  // namespace rumorlab
