#pragma once

// Coordinates on the open simplex with N = n + 1 points.
//
// Solid simplex: eta in Gamma_n = {eta_j > 0, sum eta_j < 1} maps to
// (1 - sum eta, eta_1, ..., eta_n). Its Fisher information is
// I(eta) = diag(eta)^{-1} + (1 - sum eta)^{-1} [1], with the closed-form
// inverse diag(eta) - eta eta^T and det I(eta)^{-1} = (1 - sum eta) prod eta.
//
// Exponential: theta in R^n maps to exp(sum theta_j X_j - psi(theta)) / (n+1)
// with psi(theta) = log(1 + sum e^{theta_j}) - log(n + 1).

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "infogeo/calculus.hpp"
#include "infogeo/errors.hpp"
#include "infogeo/linalg.hpp"
#include "infogeo/simplex.hpp"

namespace infogeo {

/// Point of the solid simplex Gamma_n.
class SolidCoordinates {
public:
  explicit SolidCoordinates(std::vector<double> eta) : eta_(std::move(eta)) {
    if (eta_.empty())
      throw DomainError("SolidCoordinates: at least one coordinate required");
    double s = 0.0;
    for (double e : eta_) {
      if (!std::isfinite(e) || !(e > 0.0))
        throw DomainError("SolidCoordinates: every eta_j must be positive");
      s += e;
    }
    if (!(s < 1.0))
      throw DomainError("SolidCoordinates: sum of eta must be below 1 (got " +
                        std::to_string(s) + ")");
  }

  [[nodiscard]] std::size_t dimension() const noexcept { return eta_.size(); }
  [[nodiscard]] std::span<const double> values() const noexcept { return eta_; }
  [[nodiscard]] double operator[](std::size_t j) const { return eta_[j]; }

  /// 1 - sum eta, the weight of the dropped point.
  [[nodiscard]] double slack() const {
    double s = 1.0;
    for (double e : eta_)
      s -= e;
    return s;
  }

private:
  std::vector<double> eta_;
};

/// Symmetric positive-definite n x n matrix.
class FisherMatrix {
public:
  explicit FisherMatrix(linalg::Matrix m) : m_(std::move(m)) {
    if (!linalg::is_symmetric(m_, 1e-12))
      throw DomainError("FisherMatrix: matrix is not symmetric");
    if (!linalg::cholesky(m_))
      throw DomainError("FisherMatrix: matrix is not positive definite");
  }

  [[nodiscard]] const linalg::Matrix &matrix() const noexcept { return m_; }
  [[nodiscard]] std::size_t dimension() const noexcept { return m_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

private:
  linalg::Matrix m_;
};

inline ProbabilityVector solid_to_simplex(const SolidCoordinates &eta) {
  std::vector<double> w;
  w.reserve(eta.dimension() + 1);
  w.push_back(eta.slack());
  w.insert(w.end(), eta.values().begin(), eta.values().end());
  return ProbabilityVector(std::move(w));
}

inline SolidCoordinates simplex_to_solid(const ProbabilityVector &p) {
  return SolidCoordinates(
      std::vector<double>(p.weights().begin() + 1, p.weights().end()));
}

inline FisherMatrix fisher_matrix(const SolidCoordinates &eta) {
  const std::size_t n = eta.dimension();
  const double inv_slack = 1.0 / eta.slack();
  linalg::Matrix m(n, n, inv_slack);
  for (std::size_t j = 0; j < n; ++j)
    m(j, j) += 1.0 / eta[j];
  return FisherMatrix(std::move(m));
}

/// diag(eta) - eta eta^T; no linear solve.
inline FisherMatrix fisher_inverse(const SolidCoordinates &eta) {
  const std::size_t n = eta.dimension();
  linalg::Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      m(i, j) = (i == j ? eta[i] : 0.0) - eta[i] * eta[j];
  return FisherMatrix(std::move(m));
}

/// det I(eta)^{-1} = (1 - sum eta) prod eta.
inline double fisher_inverse_determinant(const SolidCoordinates &eta) {
  double d = eta.slack();
  for (double e : eta.values())
    d *= e;
  return d;
}

/// I(eta)^{-1} applied to the Euclidean gradient of f o pi.
inline std::vector<double> amari_natural_gradient(std::span<const double> grad,
                                                  const SolidCoordinates &eta) {
  if (grad.size() != eta.dimension())
    throw DomainError("amari_natural_gradient: gradient has wrong dimension");
  // (diag(eta) - eta eta^T) g = eta * (g - <eta, g>)
  double dot = 0.0;
  for (std::size_t j = 0; j < grad.size(); ++j)
    dot += eta[j] * grad[j];
  std::vector<double> out(grad.size());
  for (std::size_t j = 0; j < grad.size(); ++j)
    out[j] = eta[j] * (grad[j] - dot);
  return out;
}

/// Fixed-step RK4 for eta' = sign * I(eta)^{-1} grad(eta) on [0, t_end],
/// returning the coordinates at every step (t_0 = 0 included).
inline std::vector<SolidCoordinates> integrate_amari_flow(
    const std::function<std::vector<double>(const SolidCoordinates &)> &grad,
    const SolidCoordinates &eta0, double t_end, double dt, double sign = 1.0) {
  if (!(dt > 0.0) || !(t_end > 0.0))
    throw DomainError("integrate_amari_flow: dt and t_end must be positive");
  const auto steps = static_cast<std::size_t>(
      std::max(1.0, std::ceil(t_end / dt - 1e-9)));
  const double h = t_end / double(steps);
  const std::size_t n = eta0.dimension();
  auto field = [&](const std::vector<double> &x) {
    const SolidCoordinates e(x);
    std::vector<double> v = amari_natural_gradient(grad(e), e);
    for (double &c : v)
      c *= sign;
    return v;
  };
  auto axpy = [&](const std::vector<double> &x, const std::vector<double> &k,
                  double a) {
    std::vector<double> y(x);
    for (std::size_t i = 0; i < n; ++i)
      y[i] += a * k[i];
    return y;
  };
  std::vector<SolidCoordinates> out;
  out.reserve(steps + 1);
  out.push_back(eta0);
  std::vector<double> x(eta0.values().begin(), eta0.values().end());
  for (std::size_t s = 0; s < steps; ++s) {
    const auto k1 = field(x);
    const auto k2 = field(axpy(x, k1, 0.5 * h));
    const auto k3 = field(axpy(x, k2, 0.5 * h));
    const auto k4 = field(axpy(x, k3, h));
    for (std::size_t i = 0; i < n; ++i)
      x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    out.emplace_back(x);
  }
  return out;
}

struct ExponentialPoint {
  ProbabilityVector point;
  double psi;
};

inline ExponentialPoint exponential_parametrization(std::span<const double> theta) {
  if (theta.empty())
    throw DomainError("exponential_parametrization: theta must be non-empty");
  const std::size_t n = theta.size();
  std::vector<double> logw(n + 1);
  logw[0] = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    logw[j + 1] = theta[j];
  const double psi = calculus::logsumexp(logw) - std::log(double(n + 1));
  return {ProbabilityVector::from_log_weights(logw), psi};
}

/// Fisher information in the exponential coordinates: the Hessian of psi,
/// diag(p_1..p_n) - p p^T.
inline FisherMatrix exponential_fisher_matrix(std::span<const double> theta) {
  const ProbabilityVector p = exponential_parametrization(theta).point;
  const std::size_t n = theta.size();
  linalg::Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      m(i, j) = (i == j ? p[i + 1] : 0.0) - p[i + 1] * p[j + 1];
  return FisherMatrix(std::move(m));
}

/// Fisher-Rao metric on tangent vectors of the embedded simplex:
/// sum u v / p. Both vectors must sum to zero.
inline double fisher_rao_metric(const ProbabilityVector &p,
                                std::span<const double> u,
                                std::span<const double> v) {
  if (u.size() != p.size() || v.size() != p.size())
    throw SpaceMismatch("fisher_rao_metric: size mismatch");
  auto tangent = [](std::span<const double> x) {
    double s = 0.0;
    for (double c : x)
      s += c;
    return std::abs(s) <= 1e-12 * std::max(1.0, calculus::max_abs(x));
  };
  if (!tangent(u) || !tangent(v))
    throw TangencyError("fisher_rao_metric: vectors must sum to zero");
  double g = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    g += u[i] * v[i] / p[i];
  return g;
}

/// a = 2 sqrt(p), a point of the sphere of radius 2.
inline std::vector<double> sphere_embedding(const ProbabilityVector &p) {
  std::vector<double> a(p.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    a[i] = 2.0 * std::sqrt(p[i]);
  return a;
}

/// Differential of sigma(a) = a^2 / 4 at a applied to w: a w / 2.
inline std::vector<double> sphere_differential(std::span<const double> a,
                                               std::span<const double> w) {
  if (a.size() != w.size())
    throw SpaceMismatch("sphere_differential: size mismatch");
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < d.size(); ++i)
    d[i] = 0.5 * a[i] * w[i];
  return d;
}

} // namespace infogeo
