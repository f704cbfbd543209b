#pragma once

// Accelerations of curves in the open simplex and Hessian quadratic forms.
//
// All derivatives are central differences at steps h and h/2 combined by
// Richardson extrapolation.

#include <cmath>
#include <cstddef>
#include <vector>

#include "infogeo/calculus.hpp"
#include "infogeo/flows.hpp"
#include "infogeo/simplex.hpp"

namespace infogeo {

inline constexpr double kSecondOrderStep = 1e-4;
inline constexpr double kHessianStep = 1e-3;

/// Exponential acceleration  p''/p - (Sp)^2 + E_{p(t)}[(Sp)^2].
///
/// The derivatives are taken on log p, where p''/p = (log p)'' +
/// ((log p)')^2.
template <CurveLike C>
FiberVector e_acceleration(const C &curve, double t,
                           double h = kSecondOrderStep) {
  const ProbabilityVector p = detail::sample_curve(curve, t);
  const calculus::Derivatives d = calculus::richardson_vec(
      [&](double s) {
        // log(p(s)/p(t)) keeps the samples near zero, which limits roundoff
        const ProbabilityVector q = detail::sample_curve(curve, s);
        std::vector<double> r(q.size());
        for (std::size_t i = 0; i < r.size(); ++i)
          r[i] = std::log(q[i] / p[i]);
        return r;
      },
      t, h);
  const std::size_t n = p.size();
  const FiberVector score = center(d.first, p);
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i)
    sq[i] = score[i] * score[i];
  const double mean_sq = expectation(p, sq);
  std::vector<double> a(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double pddot_over_p = d.second[i] + d.first[i] * d.first[i];
    a[i] = pddot_over_p - sq[i] + mean_sq;
  }
  return center(a, p);
}

/// Mixture acceleration p''/p, differentiating the weights directly.
template <CurveLike C>
FiberVector m_acceleration(const C &curve, double t,
                           double h = kSecondOrderStep) {
  const ProbabilityVector p = detail::sample_curve(curve, t);
  const calculus::Derivatives d = calculus::richardson_vec(
      [&](double s) {
        const ProbabilityVector q = detail::sample_curve(curve, s);
        return std::vector<double>(q.weights().begin(), q.weights().end());
      },
      t, h);
  std::vector<double> a(p.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    a[i] = d.second[i] / p[i];
  return center(a, p);
}

/// <Hess_m f(p) U, U>_p as d^2/dt^2 f(e^{tU - psi(t)} p) at t = 0. Along
/// this exponential family the e-acceleration vanishes, so the second
/// derivative reduces to the mixture Hessian form.
template <class F>
  requires std::invocable<const F &, const ProbabilityVector &>
double m_hessian_quadratic_form(const F &f, const FiberVector &u,
                                double h = kHessianStep) {
  auto g = [&](double t) { return double(f(exp_family_curve(u, t))); };
  return calculus::richardson_second(g, 0.0, h);
}

/// Counterpart for the exponential Hessian: d^2/dt^2 f((1 + tV) p) at 0,
/// probing along the mixture geodesic whose m-acceleration vanishes.
template <class F>
  requires std::invocable<const F &, const ProbabilityVector &>
double e_hessian_quadratic_form(const F &f, const FiberVector &v,
                                double h = kHessianStep) {
  auto g = [&](double t) { return double(f(mixture_flow_curve(v, t))); };
  return calculus::richardson_second(g, 0.0, h);
}

} // namespace infogeo
