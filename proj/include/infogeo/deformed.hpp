#pragma once

// Deformed logarithms log_A(x) = int_1^x du / A(u), their inverses exp_A,
// the q-score and the q-statistical bundle, and the Tsallis entropy.
//
// Built-in kinds, each with its closed form:
//   power(q)    A(u) = u^q          ln_q(x) = (x^{1-q} - 1) / (1 - q)
//                                   exp_q(y) = (1 + (1-q) y)^{1/(1-q)}
//   kaniadakis  A(u) = 2u^2/(1+u^2) ln(x) = (x - 1/x) / 2
//   newton      A(u) = u/(1+u)      ln(x) = log x + x - 1
// A custom A is integrated by adaptive Simpson quadrature in s = log u and
// inverted by bracketed Newton iteration.
//
// Note that exp_q above is the inverse of ln_q; the form
// (q + (1-q) y)^{1/(1-q)} does not return 1 at y = 0.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "infogeo/errors.hpp"
#include "infogeo/flows.hpp"
#include "infogeo/simplex.hpp"

namespace infogeo {

namespace quadrature {

namespace detail {

template <class F>
double simpson_step(const F &f, double a, double b, double fa, double fm,
                    double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace detail

/// Adaptive Simpson quadrature of f on [a, b] to absolute tolerance tol.
template <class F>
double adaptive_simpson(const F &f, double a, double b, double tol = 1e-10,
                        int max_depth = 50) {
  if (a == b)
    return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

} // namespace quadrature

class DeformedLog {
public:
  struct Power {
    double q;
  };
  struct Kaniadakis {};
  struct Newton {};
  struct Custom {
    std::function<double(double)> a;
    std::string name;
  };
  using Kind = std::variant<Power, Kaniadakis, Newton, Custom>;

  static DeformedLog power(double q) {
    if (!std::isfinite(q))
      throw DomainError("DeformedLog::power: q must be finite");
    return DeformedLog(Power{q});
  }
  static DeformedLog kaniadakis() { return DeformedLog(Kaniadakis{}); }
  static DeformedLog newton() { return DeformedLog(Newton{}); }
  /// A must be positive on (0, inf).
  static DeformedLog custom(std::function<double(double)> a,
                            std::string name = "custom") {
    if (!a)
      throw DomainError("DeformedLog::custom: A must be callable");
    return DeformedLog(Custom{std::move(a), std::move(name)});
  }

  [[nodiscard]] const Kind &kind() const noexcept { return kind_; }

  [[nodiscard]] std::string name() const {
    return std::visit(
        [](const auto &k) -> std::string {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, Power>)
            return "power";
          else if constexpr (std::is_same_v<K, Kaniadakis>)
            return "kaniadakis";
          else if constexpr (std::is_same_v<K, Newton>)
            return "newton";
          else
            return k.name;
        },
        kind_);
  }

  /// The generating function A(u), u > 0.
  [[nodiscard]] double a(double u) const {
    if (!(u > 0.0))
      throw RangeError("DeformedLog::a: argument must be positive");
    return std::visit(
        [u](const auto &k) -> double {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, Power>)
            return k.q == 1.0 ? u : std::pow(u, k.q);
          else if constexpr (std::is_same_v<K, Kaniadakis>)
            return 2.0 * u * u / (1.0 + u * u);
          else if constexpr (std::is_same_v<K, Newton>)
            return u / (1.0 + u);
          else
            return k.a(u);
        },
        kind_);
  }

  [[nodiscard]] double log(double x) const {
    if (!(x > 0.0) || !std::isfinite(x))
      throw RangeError("log_A: argument must be positive and finite");
    return std::visit(
        [&](const auto &k) -> double {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, Power>) {
            if (k.q == 1.0)
              return std::log(x);
            // (x^{1-q} - 1) / (1-q) = expm1((1-q) log x) / (1-q)
            const double r = 1.0 - k.q;
            return std::expm1(r * std::log(x)) / r;
          } else if constexpr (std::is_same_v<K, Kaniadakis>) {
            return 0.5 * (x - 1.0 / x);
          } else if constexpr (std::is_same_v<K, Newton>) {
            return std::log(x) + x - 1.0;
          } else {
            return custom_log(k, x);
          }
        },
        kind_);
  }

  [[nodiscard]] double exp(double y) const {
    if (!std::isfinite(y))
      throw RangeError("exp_A: argument must be finite");
    return std::visit(
        [&](const auto &k) -> double {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, Power>) {
            if (k.q == 1.0)
              return std::exp(y);
            const double r = 1.0 - k.q;
            const double base = 1.0 + r * y;
            if (!(base > 0.0))
              throw RangeError("exp_q: argument outside the range of ln_q");
            return std::exp(std::log1p(r * y) / r);
          } else if constexpr (std::is_same_v<K, Kaniadakis>) {
            return std::exp(std::asinh(y));
          } else if constexpr (std::is_same_v<K, Newton>) {
            return newton_exp(y);
          } else {
            return custom_exp(k, y);
          }
        },
        kind_);
  }

  /// Open range of log_A, i.e. the domain of exp_A. Unknown bounds of a
  /// custom A are reported as infinite.
  [[nodiscard]] std::pair<double, double> log_range() const {
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (const auto *p = std::get_if<Power>(&kind_)) {
      if (p->q < 1.0)
        return {-1.0 / (1.0 - p->q), inf};
      if (p->q > 1.0)
        return {-inf, 1.0 / (p->q - 1.0)};
    }
    return {-inf, inf};
  }

private:
  explicit DeformedLog(Kind k) : kind_(std::move(k)) {}

  static double custom_log(const Custom &k, double x) {
    // int_1^x du/A(u) = int_0^{log x} e^s / A(e^s) ds
    auto integrand = [&](double s) {
      const double u = std::exp(s);
      const double av = k.a(u);
      if (!(av > 0.0) || !std::isfinite(av))
        throw DomainError("log_A: A must be positive and finite");
      return u / av;
    };
    return quadrature::adaptive_simpson(integrand, 0.0, std::log(x), 1e-10);
  }

  static double newton_exp(double y) {
    // solve s + e^s - 1 = y for s = log x; g is increasing and convex.
    double s = y > 1.0 ? std::log(y) : y - 0.5;
    for (int it = 0; it < 200; ++it) {
      const double es = std::exp(s);
      const double step = (s + es - 1.0 - y) / (1.0 + es);
      s -= step;
      if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(s)))
        break;
    }
    return std::exp(s);
  }

  double custom_exp(const Custom &k, double y) const {
    // bracket log_A(x) = y in x, then Newton steps safeguarded by bisection
    double lo = 1.0;
    double hi = 1.0;
    if (y > 0.0) {
      while (custom_log(k, hi) < y) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300)
          throw RangeError("exp_A: argument beyond the range of log_A");
      }
    } else if (y < 0.0) {
      while (custom_log(k, lo) > y) {
        hi = lo;
        lo *= 0.5;
        if (lo < 1e-300)
          throw RangeError("exp_A: argument beyond the range of log_A");
      }
    } else {
      return 1.0;
    }
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
      const double g = custom_log(k, x) - y;
      if (g > 0.0)
        hi = x;
      else
        lo = x;
      double next = x - g * k.a(x); // d/dx log_A = 1/A
      if (!(next > lo && next < hi))
        next = 0.5 * (lo + hi);
      if (std::abs(next - x) <= 1e-12 * std::max(1.0, x) / 16.0 ||
          hi - lo <= 1e-15 * hi) {
        x = next;
        break;
      }
      x = next;
    }
    return x;
  }

  Kind kind_;
};

inline double log_A(const DeformedLog &dl, double x) { return dl.log(x); }
inline double exp_A(const DeformedLog &dl, double y) { return dl.exp(y); }

/// Tsallis q-logarithm and its inverse.
inline double ln_q(double q, double x) { return DeformedLog::power(q).log(x); }
inline double exp_q(double q, double y) { return DeformedLog::power(q).exp(y); }

/// Element of the q-statistical bundle: sum_x U(x) p(x)^q = 0.
class QFiberVector {
public:
  /// Re-centers with weights p^q; drift above kDriftTolerance (relative) is
  /// rejected like for FiberVector.
  QFiberVector(ProbabilityVector base, double q, std::vector<double> values)
      : base_(std::move(base)), q_(q), values_(std::move(values)) {
    if (values_.size() != base_.size())
      throw SpaceMismatch("QFiberVector: value count differs from base size");
    double m = 0.0;
    double z = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!std::isfinite(values_[i]))
        throw DomainError("QFiberVector: values must be finite");
      const double w = std::pow(base_[i], q_);
      m += values_[i] * w;
      z += w;
    }
    const double scale = std::max(1.0, calculus::max_abs(values_));
    if (std::abs(m) > kDriftTolerance * scale * z)
      throw DomainError("QFiberVector: values are not q-centered");
    for (double &v : values_)
      v -= m / z;
  }

  [[nodiscard]] const ProbabilityVector &base() const noexcept { return base_; }
  [[nodiscard]] double q() const noexcept { return q_; }
  [[nodiscard]] std::span<const double> values() const noexcept {
    return values_;
  }
  [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }

  /// sum_x U(x) p(x)^q.
  [[nodiscard]] double escort_sum() const {
    double s = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i)
      s += values_[i] * std::pow(base_[i], q_);
    return s;
  }

private:
  ProbabilityVector base_;
  double q_;
  std::vector<double> values_;
};

/// q-score d/dt ln_q p(t) = p'(t) / p(t)^q by central differences; q = 1
/// is the ordinary score.
template <CurveLike C>
QFiberVector q_score(const C &curve, double t, double q, double h = 1e-4) {
  if (q == 1.0) {
    FiberVector s = score_of_curve(curve, t, h);
    std::vector<double> v(s.values().begin(), s.values().end());
    return QFiberVector(s.base(), 1.0, std::move(v));
  }
  if (!(h > 0.0))
    throw DomainError("q_score: step must be positive");
  ProbabilityVector p = detail::sample_curve(curve, t);
  const ProbabilityVector plus = detail::sample_curve(curve, t + h);
  const ProbabilityVector minus = detail::sample_curve(curve, t - h);
  std::vector<double> v(p.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = (plus[i] - minus[i]) / (2.0 * h) / std::pow(p[i], q);
  return QFiberVector(std::move(p), q, std::move(v));
}

/// Tsallis entropy (sum p^q - 1) / (1 - q); Shannon entropy at q = 1.
inline double tsallis_entropy(const ProbabilityVector &p, double q) {
  if (q == 1.0)
    return entropy(p);
  // sum p^q - 1 = sum p (p^{q-1} - 1), evaluated with expm1 near q = 1
  double s = 0.0;
  for (double w : p.weights())
    s += w * std::expm1((q - 1.0) * std::log(w));
  return s / (1.0 - q);
}

/// Generalized entropy -sum p^q ln_q(p), the same value computed through the
/// deformed logarithm.
inline double generalized_entropy(const ProbabilityVector &p, double q) {
  const DeformedLog dl = DeformedLog::power(q);
  double s = 0.0;
  for (double w : p.weights())
    s -= std::pow(w, q) * dl.log(w);
  return s;
}

} // namespace infogeo
