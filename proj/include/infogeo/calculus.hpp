#pragma once

// Small numerical helpers shared across the library: a stable log-sum-exp
// and central finite differences with one step of Richardson extrapolation.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace infogeo::calculus {

/// log(sum_i exp(v_i)), shifted by the maximum so that it never overflows.
inline double logsumexp(std::span<const double> v) {
  if (v.empty())
    return -std::numeric_limits<double>::infinity();
  const double m = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(m))
    return m;
  double s = 0.0;
  for (double x : v)
    s += std::exp(x - m);
  return m + std::log(s);
}

/// Central first difference (g(t+h) - g(t-h)) / 2h of a scalar function.
template <class F> double central_first(F &&g, double t, double h) {
  return (g(t + h) - g(t - h)) / (2.0 * h);
}

/// Central second difference (g(t+h) - 2g(t) + g(t-h)) / h^2.
template <class F> double central_second(F &&g, double t, double h) {
  return (g(t + h) - 2.0 * g(t) + g(t - h)) / (h * h);
}

/// First derivative by central differences at h and h/2, Richardson-combined
/// to remove the O(h^2) term.
template <class F> double richardson_first(F &&g, double t, double h) {
  const double coarse = central_first(g, t, h);
  const double fine = central_first(g, t, 0.5 * h);
  return (4.0 * fine - coarse) / 3.0;
}

/// Second derivative, same extrapolation as richardson_first.
template <class F> double richardson_second(F &&g, double t, double h) {
  const double coarse = central_second(g, t, h);
  const double fine = central_second(g, t, 0.5 * h);
  return (4.0 * fine - coarse) / 3.0;
}

/// Componentwise versions for vector-valued g: R -> R^N. The samples are
/// taken once per abscissa so that each evaluation of g is reused.
template <class F>
std::vector<double> central_first_vec(F &&g, double t, double h) {
  const std::vector<double> plus = g(t + h);
  const std::vector<double> minus = g(t - h);
  std::vector<double> d(plus.size());
  for (std::size_t i = 0; i < d.size(); ++i)
    d[i] = (plus[i] - minus[i]) / (2.0 * h);
  return d;
}

struct Derivatives {
  std::vector<double> first;
  std::vector<double> second;
};

/// First and second derivatives of g: R -> R^N at t, Richardson-extrapolated
/// from steps h and h/2 (five samples of g in total).
template <class F> Derivatives richardson_vec(F &&g, double t, double h) {
  const double hh = 0.5 * h;
  const std::vector<double> g0 = g(t);
  const std::vector<double> gp = g(t + h);
  const std::vector<double> gm = g(t - h);
  const std::vector<double> gp2 = g(t + hh);
  const std::vector<double> gm2 = g(t - hh);
  const std::size_t n = g0.size();
  Derivatives d{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const double d1c = (gp[i] - gm[i]) / (2.0 * h);
    const double d1f = (gp2[i] - gm2[i]) / (2.0 * hh);
    const double d2c = (gp[i] - 2.0 * g0[i] + gm[i]) / (h * h);
    const double d2f = (gp2[i] - 2.0 * g0[i] + gm2[i]) / (hh * hh);
    d.first[i] = (4.0 * d1f - d1c) / 3.0;
    d.second[i] = (4.0 * d2f - d2c) / 3.0;
  }
  return d;
}

inline double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v)
    m = std::max(m, std::abs(x));
  return m;
}

inline double max_abs_diff(std::span<const double> a,
                           std::span<const double> b) {
  double m = 0.0;
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return a.size() == b.size() ? m : std::numeric_limits<double>::infinity();
}

} // namespace infogeo::calculus
