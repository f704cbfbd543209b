#pragma once

// A few one-parameter curves through p with direction U, evaluated exactly
// as written and studied numerically:
//
//   ex1  (1/2 + (1 - tU)^2 / 2 - (t/2) E_p[U^2]) p
//   ex2  (tU + sqrt(1 - t^2 E_p[U^2]))^2 p
//   ex3  (1 + t^2 E_p[U^2])^{-1} (1 + tU)^2 p
//   ex4  (1 + sinh(t) U)^2 / cosh^2(t) p,  with E_p[U^2] = 1
//
// The raw weights are never renormalized: a curve whose weights do not sum
// to one is reported as such.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "infogeo/flows.hpp"
#include "infogeo/simplex.hpp"
#include "infogeo/transports.hpp"

namespace infogeo {

enum class ZooCurve { ex1, ex2, ex3, ex4 };

inline constexpr ZooCurve kZooCurves[] = {ZooCurve::ex1, ZooCurve::ex2,
                                          ZooCurve::ex3, ZooCurve::ex4};

inline std::string_view zoo_name(ZooCurve c) {
  switch (c) {
  case ZooCurve::ex1:
    return "ex1";
  case ZooCurve::ex2:
    return "ex2";
  case ZooCurve::ex3:
    return "ex3";
  case ZooCurve::ex4:
    return "ex4";
  }
  return "?";
}

inline std::optional<ZooCurve> parse_zoo_name(std::string_view name) {
  for (ZooCurve c : kZooCurves)
    if (zoo_name(c) == name)
      return c;
  return std::nullopt;
}

/// Raw weights of a zoo curve at t, possibly non-positive, non-finite or
/// not summing to one.
inline std::vector<double> zoo_raw_weights(ZooCurve c, const FiberVector &u,
                                           double t) {
  const ProbabilityVector &p = u.base();
  const double sigma2 = squared_norm(u);
  std::vector<double> w(p.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    double factor = 0.0;
    switch (c) {
    case ZooCurve::ex1: {
      const double a = 1.0 - t * u[i];
      factor = 0.5 + 0.5 * a * a - 0.5 * t * sigma2;
      break;
    }
    case ZooCurve::ex2: {
      const double a = t * u[i] + std::sqrt(1.0 - t * t * sigma2);
      factor = a * a;
      break;
    }
    case ZooCurve::ex3: {
      const double a = 1.0 + t * u[i];
      factor = a * a / (1.0 + t * t * sigma2);
      break;
    }
    case ZooCurve::ex4: {
      const double a = 1.0 + std::sinh(t) * u[i];
      const double ch = std::cosh(t);
      factor = a * a / (ch * ch);
      break;
    }
    }
    w[i] = factor * p[i];
  }
  return w;
}

namespace detail {

inline bool all_positive(const std::vector<double> &w) {
  return std::all_of(w.begin(), w.end(), [](double x) {
    return std::isfinite(x) && x > kWeightFloor;
  });
}

} // namespace detail

/// Largest interval around 0 (within [-limit, limit]) on which the raw
/// weights are finite and strictly positive; endpoints by bisection.
inline Interval zoo_positivity_interval(ZooCurve c, const FiberVector &u,
                                        double limit = 10.0) {
  auto ok = [&](double t) { return detail::all_positive(zoo_raw_weights(c, u, t)); };
  auto edge = [&](double dir) {
    const double step = 1e-2;
    double inside = 0.0;
    double t = step;
    while (t <= limit && ok(dir * t)) {
      inside = t;
      t += step;
    }
    if (t > limit)
      return dir * limit;
    double outside = t;
    for (int k = 0; k < 80; ++k) {
      const double mid = 0.5 * (inside + outside);
      (ok(dir * mid) ? inside : outside) = mid;
    }
    return dir * inside;
  };
  return {edge(-1.0), edge(1.0)};
}

inline constexpr double kMembershipTolerance = 1e-12;

/// The zoo curve as a point of the open simplex. Throws OutOfInterval when a
/// weight is not positive and DomainError when the weights do not sum to
/// one, instead of correcting the curve.
inline ProbabilityVector curve_zoo(ZooCurve c, const FiberVector &u, double t) {
  if (c == ZooCurve::ex4)
    require_unit_norm(u, "curve_zoo(ex4)");
  std::vector<double> w = zoo_raw_weights(c, u, t);
  if (!detail::all_positive(w)) {
    const Interval iv = zoo_positivity_interval(c, u);
    throw OutOfInterval("curve_zoo(" + std::string(zoo_name(c)) +
                            "): weights are not positive",
                        iv.lo, iv.hi);
  }
  double s = 0.0;
  for (double x : w)
    s += x;
  if (std::abs(s - 1.0) > kMembershipTolerance)
    throw DomainError("curve_zoo(" + std::string(zoo_name(c)) +
                      "): weights sum to " + std::to_string(s));
  return ProbabilityVector::from_unnormalized(u.base().space(), std::move(w));
}

/// Score printed for ex4: 2 (cosh(t) U / (1 + sinh(t) U) - tanh(t)).
inline std::vector<double> zoo_ex4_printed_score(const FiberVector &u, double t) {
  std::vector<double> s(u.size());
  for (std::size_t i = 0; i < s.size(); ++i)
    s[i] = 2.0 * (std::cosh(t) * u[i] / (1.0 + std::sinh(t) * u[i]) -
                  std::tanh(t));
  return s;
}

struct ZooSample {
  double t;
  std::vector<double> weights; // raw
  std::vector<double> score;   // d/dt log of the raw weights
};

struct ZooStudy {
  ZooCurve curve;
  std::vector<ZooSample> samples;
  double max_membership_defect = 0.0; // max_t |sum of raw weights - 1|
  bool positive = true;
  bool member = true; // positive and sum within kMembershipTolerance
  // Residuals are max over samples of the max-norm difference; only present
  // where they make sense.
  std::optional<double> printed_score_residual; // ex4
  std::optional<double> h_transport_residual;   // ex3, ex4
};

/// Samples the curve at t_k = k t_end / steps, k = 0..steps, and runs the
/// companion checks: simplex membership for every curve, the printed score
/// of ex4, and the comparison of the score with the h-transport of U for ex3
/// and ex4.
inline ZooStudy study_zoo_curve(ZooCurve c, const FiberVector &u, double t_end,
                                std::size_t steps = 50, double h = 1e-5) {
  if (c == ZooCurve::ex4)
    require_unit_norm(u, "study_zoo_curve(ex4)");
  if (steps == 0)
    steps = 1;
  ZooStudy st{c, {}, 0.0, true, true, std::nullopt, std::nullopt};
  const bool compare_h = c == ZooCurve::ex3 || c == ZooCurve::ex4;
  double printed_res = 0.0;
  double h_res = 0.0;
  bool comparisons_valid = true;
  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = t_end * double(k) / double(steps);
    ZooSample s{t, zoo_raw_weights(c, u, t), {}};
    const auto wp = zoo_raw_weights(c, u, t + h);
    const auto wm = zoo_raw_weights(c, u, t - h);
    const bool pos = detail::all_positive(s.weights) &&
                     detail::all_positive(wp) && detail::all_positive(wm);
    double sum = 0.0;
    for (double x : s.weights)
      sum += x;
    st.max_membership_defect =
        std::max(st.max_membership_defect,
                 std::isfinite(sum) ? std::abs(sum - 1.0)
                                    : std::numeric_limits<double>::infinity());
    s.score.resize(u.size());
    for (std::size_t i = 0; i < u.size(); ++i)
      s.score[i] = pos ? (std::log(wp[i]) - std::log(wm[i])) / (2.0 * h)
                       : std::numeric_limits<double>::quiet_NaN();
    if (!pos) {
      st.positive = false;
      comparisons_valid = false;
    } else if (std::abs(sum - 1.0) <= kMembershipTolerance) {
      const ProbabilityVector pt =
          ProbabilityVector::from_unnormalized(u.base().space(), s.weights);
      if (c == ZooCurve::ex4)
        printed_res = std::max(
            printed_res,
            calculus::max_abs_diff(s.score, zoo_ex4_printed_score(u, t)));
      if (compare_h)
        h_res = std::max(h_res, calculus::max_abs_diff(
                                    s.score, h_transport(u, pt).values()));
    } else {
      comparisons_valid = false;
    }
    st.samples.push_back(std::move(s));
  }
  st.member = st.positive && st.max_membership_defect <= kMembershipTolerance;
  if (comparisons_valid) {
    if (c == ZooCurve::ex4)
      st.printed_score_residual = printed_res;
    if (compare_h)
      st.h_transport_residual = h_res;
  }
  return st;
}

} // namespace infogeo
