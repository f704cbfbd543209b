#pragma once

// Parallel transports between fibers of the statistical bundle.
//
//   e-transport  U  ->  U - E_q[U]
//   m-transport  U  ->  (p/q) U
//   h-transport  U  ->  sqrt(p/q) U - (1 + sqrt(p/q)) E_q[sqrt(p/q) U]
//                                     / (1 + E_q[sqrt(p/q)])
//
// e and m are dual to each other and conserve <e(U), m(V)>; h is an
// isometry with inverse h_{q->p}. Each result is a fiber at q.

#include <cmath>
#include <vector>

#include "infogeo/simplex.hpp"

namespace infogeo {

inline FiberVector e_transport(const FiberVector &u,
                               const ProbabilityVector &q) {
  require_same_space(u.base().space(), q.space(), "e_transport");
  return center(u.values(), q);
}

inline FiberVector m_transport(const FiberVector &u,
                               const ProbabilityVector &q) {
  require_same_space(u.base().space(), q.space(), "m_transport");
  const ProbabilityVector &p = u.base();
  std::vector<double> v(u.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = p[i] / q[i] * u[i];
  return FiberVector(q, std::move(v));
}

inline FiberVector h_transport(const FiberVector &u,
                               const ProbabilityVector &q) {
  require_same_space(u.base().space(), q.space(), "h_transport");
  const ProbabilityVector &p = u.base();
  const std::size_t n = u.size();
  std::vector<double> root(n);
  for (std::size_t i = 0; i < n; ++i)
    root[i] = std::sqrt(p[i] / q[i]);

  double mean_root = 0.0;
  double mean_root_u = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_root += q[i] * root[i];
    mean_root_u += q[i] * root[i] * u[i];
  }
  const double k = mean_root_u / (1.0 + mean_root);

  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = root[i] * u[i] - (1.0 + root[i]) * k;
  return FiberVector(q, std::move(v));
}

enum class Transport { exponential, mixture, hilbert };

inline FiberVector transport(Transport kind, const FiberVector &u,
                             const ProbabilityVector &q) {
  switch (kind) {
  case Transport::exponential:
    return e_transport(u, q);
  case Transport::mixture:
    return m_transport(u, q);
  case Transport::hilbert:
    return h_transport(u, q);
  }
  throw DomainError("transport: unknown kind");
}

} // namespace infogeo
