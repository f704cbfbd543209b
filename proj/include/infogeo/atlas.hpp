#pragma once

// Exponential and mixture affine atlases of the statistical bundle.
//
// The e-chart centered at p sends (q, w) to (log(q/p) - E_p[log(q/p)],
// e-transport of w to p); the m-chart sends it to (q/p - 1, m-transport of
// w to p). Both have affine transitions.

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "infogeo/simplex.hpp"
#include "infogeo/transports.hpp"

namespace infogeo {

/// Coordinates of a bundle element in the chart centered at `center`.
struct ChartImage {
  ProbabilityVector center;
  FiberVector point_coord;
  FiberVector vector_coord;
};

/// A point of the statistical bundle: a probability and a fiber vector at it.
struct BundlePoint {
  ProbabilityVector point;
  FiberVector vector;
};

/// K_p(u) = log E_p[e^u].
inline double cumulant(const FiberVector &u) {
  const ProbabilityVector &p = u.base();
  std::vector<double> a(p.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    a[i] = u[i] + std::log(p[i]);
  return calculus::logsumexp(a);
}

inline ChartImage e_chart(const ProbabilityVector &center_point,
                          const ProbabilityVector &q, const FiberVector &w) {
  require_same_space(center_point.space(), q.space(), "e_chart");
  if (!(w.base() == q))
    throw BaseMismatch("e_chart: w must be based at q");
  std::vector<double> lr(q.size());
  for (std::size_t i = 0; i < lr.size(); ++i)
    lr[i] = std::log(q[i] / center_point[i]);
  return {center_point, center(lr, center_point), e_transport(w, center_point)};
}

/// Inverse of e_chart: (e^{u - K_p(u)} p, v - E_q[v]).
inline BundlePoint e_patch(const FiberVector &u, const FiberVector &v) {
  u.require_same_base(v);
  const ProbabilityVector &p = u.base();
  std::vector<double> logw(p.size());
  for (std::size_t i = 0; i < logw.size(); ++i)
    logw[i] = u[i] + std::log(p[i]);
  ProbabilityVector q = ProbabilityVector::from_log_weights(p.space(), logw);
  FiberVector moved = e_transport(v, q);
  return {std::move(q), std::move(moved)};
}

/// Point part of s_{p1} o s_{p2}^{-1}: e-transport of u to p1 plus the
/// centered log(p2/p1).
inline FiberVector e_transition(const ProbabilityVector &p1,
                                const FiberVector &u) {
  const ProbabilityVector &p2 = u.base();
  require_same_space(p1.space(), p2.space(), "e_transition");
  std::vector<double> a(p1.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    a[i] = u[i] + std::log(p2[i] / p1[i]);
  return center(a, p1);
}

/// Vector part of the e-transition: the e-transport to p1.
inline FiberVector e_vector_transition(const ProbabilityVector &p1,
                                       const FiberVector &v) {
  return e_transport(v, p1);
}

inline ChartImage m_chart(const ProbabilityVector &center_point,
                          const ProbabilityVector &q, const FiberVector &w) {
  require_same_space(center_point.space(), q.space(), "m_chart");
  if (!(w.base() == q))
    throw BaseMismatch("m_chart: w must be based at q");
  std::vector<double> u(q.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    u[i] = q[i] / center_point[i] - 1.0;
  return {center_point, FiberVector(center_point, std::move(u)),
          m_transport(w, center_point)};
}

/// Inverse of m_chart: ((1 + u) p, m-transport of v to (1 + u) p). Needs
/// 1 + u > 0.
inline BundlePoint m_patch(const FiberVector &u, const FiberVector &v) {
  u.require_same_base(v);
  const ProbabilityVector &p = u.base();
  std::vector<double> w(p.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!(1.0 + u[i] > 0.0))
      throw OutOfInterval("m_patch: every coordinate of u must exceed -1",
                          -1.0, std::numeric_limits<double>::infinity());
    w[i] = (1.0 + u[i]) * p[i];
  }
  ProbabilityVector q = ProbabilityVector::from_unnormalized(p.space(), std::move(w));
  FiberVector moved = m_transport(v, q);
  return {std::move(q), std::move(moved)};
}

/// Point part of eta_{p1} o eta_{p2}^{-1}: (1 + u) p2/p1 - 1.
inline FiberVector m_transition(const ProbabilityVector &p1,
                                const FiberVector &u) {
  const ProbabilityVector &p2 = u.base();
  require_same_space(p1.space(), p2.space(), "m_transition");
  std::vector<double> a(p1.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    a[i] = (1.0 + u[i]) * p2[i] / p1[i] - 1.0;
  return FiberVector(p1, std::move(a));
}

/// Vector part of the m-transition: the m-transport to p1.
inline FiberVector m_vector_transition(const ProbabilityVector &p1,
                                       const FiberVector &v) {
  return m_transport(v, p1);
}

} // namespace infogeo
