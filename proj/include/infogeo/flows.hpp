#pragma once

// Sections of the statistical bundle, natural gradients, the flow
// integrator and the closed-form flows used as oracles.
//
// A flow of a section F is a curve with Sp(t) = F(p(t)), i.e. the
// replicator-form ODE  dp/dt = p F(p). It is integrated in the log weights
// v = log p with the classical fourth-order Runge-Kutta scheme and a
// log-sum-exp renormalization after every step, so that positivity and
// normalization hold exactly at every recorded point.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "infogeo/calculus.hpp"
#include "infogeo/simplex.hpp"
#include "infogeo/transports.hpp"

namespace infogeo {

/// p -> F(p) in S_p.
using Section = std::function<FiberVector(const ProbabilityVector &)>;

template <class S>
concept SectionLike = std::invocable<const S &, const ProbabilityVector &> &&
    std::convertible_to<std::invoke_result_t<const S &, const ProbabilityVector &>,
                        FiberVector>;

/// Natural gradient from the ambient (Euclidean) gradient: grad f(p) =
/// nabla f(p) - E_p[nabla f(p)].
template <class G>
  requires std::invocable<const G &, const ProbabilityVector &>
FiberVector natural_gradient(const G &ambient_gradient,
                             const ProbabilityVector &p) {
  const RandomVariable g = ambient_gradient(p);
  return center(g, p);
}

/// grad H(p) = -log p - H(p).
inline FiberVector grad_entropy(const ProbabilityVector &p) {
  const double h = entropy(p);
  std::vector<double> v(p.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = -std::log(p[i]) - h;
  return FiberVector(p, std::move(v));
}

/// Natural gradient of p -> KL(p || p0): log(p/p0) - KL(p || p0).
inline FiberVector grad_kl_first(const ProbabilityVector &p,
                                 const ProbabilityVector &p0) {
  require_same_space(p.space(), p0.space(), "grad_kl_first");
  std::vector<double> v(p.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = std::log(p[i] / p0[i]);
  return center(v, p);
}

/// Natural gradient of p -> KL(p0 || p): 1 - p0/p.
inline FiberVector grad_kl_second(const ProbabilityVector &p,
                                  const ProbabilityVector &p0) {
  require_same_space(p.space(), p0.space(), "grad_kl_second");
  std::vector<double> v(p.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = 1.0 - p0[i] / p[i];
  return FiberVector(p, std::move(v));
}

/// Natural gradient of p -> E_p[f]: f - E_p[f].
inline FiberVector grad_expected_value(const RandomVariable &f,
                                       const ProbabilityVector &p) {
  return center(f, p);
}

// Ready-made sections for the worked examples.

inline Section expected_value_section(RandomVariable f) {
  return [f = std::move(f)](const ProbabilityVector &p) {
    return grad_expected_value(f, p);
  };
}

inline Section entropy_section() {
  return [](const ProbabilityVector &p) { return grad_entropy(p); };
}

inline Section kl_first_section(ProbabilityVector p0) {
  return [p0 = std::move(p0)](const ProbabilityVector &p) {
    return grad_kl_first(p, p0);
  };
}

inline Section kl_second_section(ProbabilityVector p0) {
  return [p0 = std::move(p0)](const ProbabilityVector &p) {
    return grad_kl_second(p, p0);
  };
}

/// q -> transport of a fixed U to q. Its flows are the e-, m- and h-curves.
inline Section transport_section(FiberVector u, Transport kind) {
  return [u = std::move(u), kind](const ProbabilityVector &q) {
    return transport(kind, u, q);
  };
}

/// Orientation of a flow: plus integrates Sp = F(p), minus Sp = -F(p)
/// (gradient descent when F is a gradient).
enum class Sign : int { plus = 1, minus = -1 };

inline double as_double(Sign s) { return s == Sign::plus ? 1.0 : -1.0; }

/// Time-ordered samples (t, p(t), Sp(t)) with each score based at its point.
class Trajectory {
public:
  void push_back(double t, ProbabilityVector p, FiberVector score) {
    if (!times_.empty() && !(t > times_.back()))
      throw DomainError("Trajectory: times must be strictly increasing");
    if (!(score.base() == p))
      throw BaseMismatch("Trajectory: score is not based at its point");
    times_.push_back(t);
    points_.push_back(std::move(p));
    scores_.push_back(std::move(score));
  }

  [[nodiscard]] std::size_t size() const noexcept { return times_.size(); }
  [[nodiscard]] bool empty() const noexcept { return times_.empty(); }
  [[nodiscard]] std::span<const double> times() const noexcept {
    return times_;
  }
  [[nodiscard]] const std::vector<ProbabilityVector> &points() const noexcept {
    return points_;
  }
  [[nodiscard]] const std::vector<FiberVector> &scores() const noexcept {
    return scores_;
  }
  [[nodiscard]] double time(std::size_t k) const { return times_[k]; }
  [[nodiscard]] const ProbabilityVector &point(std::size_t k) const {
    return points_[k];
  }
  [[nodiscard]] const FiberVector &score(std::size_t k) const {
    return scores_[k];
  }

private:
  std::vector<double> times_;
  std::vector<ProbabilityVector> points_;
  std::vector<FiberVector> scores_;
};

inline constexpr double kDefaultStep = 1e-3;
inline constexpr double kDefaultHorizon = 10.0;

/// Fixed-step RK4 integration of Sp = sign * F(p) on [0, t_end] in log
/// coordinates. The step is t_end / ceil(t_end / dt) so the last sample
/// lands on t_end.
template <SectionLike S>
Trajectory integrate_flow(const S &section, const ProbabilityVector &p0,
                          double t_end = kDefaultHorizon,
                          double dt = kDefaultStep, Sign sign = Sign::plus) {
  if (!(dt > 0.0) || !(t_end > 0.0) || !std::isfinite(t_end))
    throw DomainError("integrate_flow: dt and t_end must be positive");
  const auto steps = static_cast<std::size_t>(
      std::max(1.0, std::ceil(t_end / dt - 1e-9)));
  const double h = t_end / double(steps);
  const double s = as_double(sign);
  const SampleSpace &space = p0.space();
  const std::size_t n = p0.size();

  auto to_point = [&](std::span<const double> v, double t) {
    for (double x : v)
      if (!std::isfinite(x))
        throw NumericalBlowup("integrate_flow: non-finite state", t);
    try {
      return ProbabilityVector::from_log_weights(space, v);
    } catch (const DomainError &e) {
      throw DomainEscape(std::string("integrate_flow: ") + e.what(), t);
    }
  };
  // Velocity of the log weights at a point: sign * F(p).
  auto velocity = [&](const ProbabilityVector &p, double t) {
    const FiberVector f = section(p);
    if (!(f.base() == p))
      throw BaseMismatch("integrate_flow: section value is not based at its "
                         "argument");
    std::vector<double> k(n);
    for (std::size_t i = 0; i < n; ++i) {
      k[i] = s * f[i];
      if (!std::isfinite(k[i]))
        throw NumericalBlowup("integrate_flow: non-finite section value", t);
    }
    return k;
  };
  auto shifted = [&](const std::vector<double> &v, const std::vector<double> &k,
                     double a) {
    std::vector<double> w(v);
    for (std::size_t i = 0; i < n; ++i)
      w[i] += a * k[i];
    return w;
  };

  Trajectory traj;
  std::vector<double> v = p0.log_weights();
  ProbabilityVector p = p0;
  std::vector<double> k1 = velocity(p, 0.0);
  traj.push_back(0.0, p, FiberVector(p, k1));

  for (std::size_t step = 0; step < steps; ++step) {
    const double t = double(step) * h;
    const std::vector<double> k2 =
        velocity(to_point(shifted(v, k1, 0.5 * h), t), t + 0.5 * h);
    const std::vector<double> k3 =
        velocity(to_point(shifted(v, k2, 0.5 * h), t), t + 0.5 * h);
    const std::vector<double> k4 = velocity(to_point(shifted(v, k3, h), t), t + h);
    for (std::size_t i = 0; i < n; ++i)
      v[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

    const double t_next = step + 1 == steps ? t_end : double(step + 1) * h;
    p = to_point(v, t_next);
    v = p.log_weights();
    k1 = velocity(p, t_next);
    traj.push_back(t_next, p, FiberVector(p, k1));
  }
  return traj;
}

/// psi(t) = log E_{p0}[e^{t f}] with its first two derivatives.
struct CumulantRecord {
  double t = 0.0;
  double psi = 0.0;
  double psi_dot = 0.0;
  double psi_ddot = 0.0;
};

struct ExpFamilyPoint {
  ProbabilityVector point;
  CumulantRecord cumulant;
};

/// p(t) = exp(t f - psi(t)) p0, evaluated through log-sum-exp.
inline ExpFamilyPoint exp_family_curve(std::span<const double> f,
                                       const ProbabilityVector &p0, double t) {
  if (f.size() != p0.size())
    throw SpaceMismatch("exp_family_curve: size mismatch");
  std::vector<double> logw(p0.size());
  for (std::size_t i = 0; i < logw.size(); ++i)
    logw[i] = t * f[i] + std::log(p0[i]);
  const double psi = calculus::logsumexp(logw);
  ProbabilityVector p = ProbabilityVector::from_log_weights(p0.space(), logw);
  const double mean = expectation(p, f);
  const double var = variance(p, f);
  return {std::move(p), CumulantRecord{t, psi, mean, var}};
}

inline ExpFamilyPoint exp_family_curve(const RandomVariable &f,
                                       const ProbabilityVector &p0, double t) {
  require_same_space(f.space(), p0.space(), "exp_family_curve");
  return exp_family_curve(f.values(), p0, t);
}

/// Exponential family through U.base() with sufficient statistic U.
inline ProbabilityVector exp_family_curve(const FiberVector &u, double t) {
  return exp_family_curve(u.values(), u.base(), t).point;
}

/// Entropy gradient ascent from p0: p0^{e^{-t}} normalized.
inline ProbabilityVector entropy_flow_curve(const ProbabilityVector &p0,
                                            double t) {
  const double a = std::exp(-t);
  std::vector<double> logw(p0.size());
  for (std::size_t i = 0; i < logw.size(); ++i)
    logw[i] = a * std::log(p0[i]);
  return ProbabilityVector::from_log_weights(p0.space(), logw);
}

/// Descent of KL(target || p) from p_init: target + (p_init - target) e^{-t}.
inline ProbabilityVector kl_mixture_flow_curve(const ProbabilityVector &p_init,
                                               const ProbabilityVector &target,
                                               double t) {
  require_same_space(p_init.space(), target.space(), "kl_mixture_flow_curve");
  const double decay = std::exp(-t);
  std::vector<double> w(p_init.size());
  for (std::size_t i = 0; i < w.size(); ++i)
    w[i] = target[i] + (p_init[i] - target[i]) * decay;
  return ProbabilityVector::from_unnormalized(p_init.space(), std::move(w));
}

struct Interval {
  double lo;
  double hi;
  [[nodiscard]] bool contains(double t) const { return lo < t && t < hi; }
};

/// Open interval ]-(max U)^{-1}, -(min U)^{-1}[ on which (1 + tU) p > 0.
inline Interval mixture_flow_interval(const FiberVector &u) {
  const auto [mn, mx] = std::minmax_element(u.values().begin(), u.values().end());
  constexpr double inf = std::numeric_limits<double>::infinity();
  return {*mx > 0.0 ? -1.0 / *mx : -inf, *mn < 0.0 ? -1.0 / *mn : inf};
}

/// Mixture geodesic (1 + tU) p; its score is the m-transport of U.
inline ProbabilityVector mixture_flow_curve(const FiberVector &u, double t) {
  const Interval iv = mixture_flow_interval(u);
  if (!iv.contains(t))
    throw OutOfInterval("mixture_flow_curve: 1 + tU is not positive", iv.lo,
                        iv.hi);
  const ProbabilityVector &p = u.base();
  std::vector<double> w(p.size());
  for (std::size_t i = 0; i < w.size(); ++i)
    w[i] = (1.0 + t * u[i]) * p[i];
  return ProbabilityVector::from_unnormalized(p.space(), std::move(w));
}

inline constexpr double kUnitNormTolerance = 1e-10;

inline void require_unit_norm(const FiberVector &u, const char *where) {
  if (std::abs(squared_norm(u) - 1.0) > kUnitNormTolerance)
    throw NormError(std::string(where) + ": U must have unit norm");
}

/// Interval around 0 on which cos(t/2) + sin(t/2) U > 0. Writing the
/// condition as cos(t/2 - atan U) > 0 gives, for every x,
/// |t/2 - atan U(x)| < pi/2.
inline Interval h_flow_interval(const FiberVector &u) {
  double lo = -std::numbers::pi;
  double hi = std::numbers::pi;
  for (double x : u.values()) {
    const double a = std::atan(x);
    lo = std::max(lo, 2.0 * (a - std::numbers::pi / 2.0));
    hi = std::min(hi, 2.0 * (a + std::numbers::pi / 2.0));
  }
  return {lo, hi};
}

/// (cos(t/2) + sin(t/2) U)^2 p for a unit U; its score is the h-transport
/// of U.
inline ProbabilityVector h_flow_curve(const FiberVector &u, double t) {
  require_unit_norm(u, "h_flow_curve");
  const double c = std::cos(0.5 * t);
  const double s = std::sin(0.5 * t);
  const ProbabilityVector &p = u.base();
  std::vector<double> w(p.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double root = c + s * u[i];
    if (!(root > 0.0)) {
      const Interval iv = h_flow_interval(u);
      throw OutOfInterval("h_flow_curve: cos(t/2) + sin(t/2) U is not "
                          "positive",
                          iv.lo, iv.hi);
    }
    w[i] = root * root * p[i];
  }
  return ProbabilityVector::from_unnormalized(p.space(), std::move(w));
}

inline constexpr double kMonotoneSlack = 1e-10;

struct FlowMonitorReport {
  std::vector<double> values;     // f(p(t_k))
  double max_increase = 0.0;      // largest f(t_{k+1}) - f(t_k), >= 0
  bool monotone = true;           // max_increase <= kMonotoneSlack
  double dissipation = 0.0;       // trapezoidal integral of |Sp|^2
  double energy_residual = 0.0;   // f(p0) - f(pT) - dissipation
  double terminal_gradient_norm = 0.0;
  std::size_t terminal_argmax = 0; // lowest index on ties
};

/// Checks the descent properties of a gradient-flow trajectory: f along the
/// curve is nonincreasing and the decrease equals the integral of |Sp|^2.
template <class F>
  requires std::invocable<const F &, const ProbabilityVector &>
FlowMonitorReport monitor_gradient_flow(const Trajectory &traj, const F &f) {
  FlowMonitorReport r;
  if (traj.empty())
    return r;
  r.values.reserve(traj.size());
  for (const ProbabilityVector &p : traj.points())
    r.values.push_back(static_cast<double>(f(p)));
  for (std::size_t k = 1; k < r.values.size(); ++k)
    r.max_increase = std::max(r.max_increase, r.values[k] - r.values[k - 1]);
  r.monotone = r.max_increase <= kMonotoneSlack;
  for (std::size_t k = 1; k < traj.size(); ++k) {
    const double dt = traj.time(k) - traj.time(k - 1);
    r.dissipation +=
        0.5 * dt * (squared_norm(traj.score(k)) + squared_norm(traj.score(k - 1)));
  }
  r.energy_residual = r.values.front() - r.values.back() - r.dissipation;
  r.terminal_gradient_norm = norm(traj.scores().back());
  const auto w = traj.points().back().weights();
  r.terminal_argmax =
      static_cast<std::size_t>(std::max_element(w.begin(), w.end()) - w.begin());
  return r;
}

} // namespace infogeo
