#pragma once

// Seeded generators of random simplex points and fiber vectors, used by the
// invariant suites and the tests. Log weights are drawn from a bounded
// interval so that weight ratios stay within e^{2 spread}.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "infogeo/simplex.hpp"

namespace infogeo {

using Rng = std::mt19937_64;

inline constexpr std::uint64_t kDefaultSeed = 42;

inline double uniform(Rng &rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline ProbabilityVector random_probability(Rng &rng, std::size_t n,
                                            double spread = 1.5) {
  std::vector<double> logw(n);
  for (double &v : logw)
    v = uniform(rng, -spread, spread);
  return ProbabilityVector::from_log_weights(logw);
}

inline std::vector<double> random_values(Rng &rng, std::size_t n,
                                         double scale = 1.0) {
  std::vector<double> v(n);
  for (double &x : v)
    x = uniform(rng, -scale, scale);
  return v;
}

inline RandomVariable random_variable(Rng &rng, std::size_t n,
                                      double scale = 1.0) {
  return RandomVariable(random_values(rng, n, scale));
}

/// Random fiber vector at p; nonzero with probability one.
inline FiberVector random_fiber(Rng &rng, const ProbabilityVector &p,
                                double scale = 1.0) {
  return center(random_values(rng, p.size(), scale), p);
}

/// Random fiber vector with E_p[U^2] = 1.
inline FiberVector random_unit_fiber(Rng &rng, const ProbabilityVector &p) {
  for (;;) {
    FiberVector u = random_fiber(rng, p);
    const double nu = norm(u);
    if (nu > 1e-3)
      return (1.0 / nu) * u;
  }
}

} // namespace infogeo
