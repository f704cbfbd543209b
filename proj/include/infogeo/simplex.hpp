#pragma once

// Points of the open probability simplex, fibers of the statistical bundle
// and the basic functionals on them.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <functional>
#include <memory>
#include <numeric>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "infogeo/calculus.hpp"
#include "infogeo/errors.hpp"

namespace infogeo {

/// Weights at or below this value are not considered strictly positive.
inline constexpr double kWeightFloor = 1e-300;
/// Largest normalization or centering drift that constructors silently fix.
inline constexpr double kDriftTolerance = 1e-6;
/// Two probability vectors are equal when their max-norm distance is below.
inline constexpr double kPointTolerance = 1e-12;

/// Finite sample space with N >= 2 points and optional unique labels.
class SampleSpace {
public:
  explicit SampleSpace(std::size_t size) : size_(size) {
    if (size < 2)
      throw DomainError("SampleSpace: at least two points are required");
  }

  explicit SampleSpace(std::vector<std::string> labels)
      : size_(labels.size()) {
    if (size_ < 2)
      throw DomainError("SampleSpace: at least two points are required");
    std::unordered_set<std::string> seen(labels.begin(), labels.end());
    if (seen.size() != labels.size())
      throw DomainError("SampleSpace: labels must be unique");
    labels_ = std::make_shared<const std::vector<std::string>>(
        std::move(labels));
  }

  [[nodiscard]] std::size_t size() const noexcept { return size_; }
  [[nodiscard]] bool has_labels() const noexcept { return labels_ != nullptr; }
  [[nodiscard]] std::span<const std::string> labels() const noexcept {
    if (!labels_)
      return {};
    return {labels_->data(), labels_->size()};
  }

  friend bool operator==(const SampleSpace &a, const SampleSpace &b) {
    if (a.size_ != b.size_)
      return false;
    if (a.labels_ == b.labels_)
      return true;
    if (!a.labels_ || !b.labels_)
      return false;
    return *a.labels_ == *b.labels_;
  }

private:
  std::size_t size_;
  std::shared_ptr<const std::vector<std::string>> labels_;
};

/// Strictly positive probability function on a SampleSpace.
class ProbabilityVector {
public:
  /// Weights must be positive and sum to 1 within kDriftTolerance; the
  /// residual drift is removed by dividing by the sum.
  ProbabilityVector(SampleSpace space, std::vector<double> weights)
      : space_(std::move(space)), weights_(std::move(weights)) {
    if (weights_.size() != space_.size())
      throw SpaceMismatch("ProbabilityVector: weight count differs from "
                          "sample space size");
    const double s = checked_sum(weights_);
    if (std::abs(s - 1.0) > kDriftTolerance)
      throw DomainError("ProbabilityVector: weights sum to " +
                        std::to_string(s) + ", not 1");
    finish(s);
  }

  explicit ProbabilityVector(const std::vector<double> &weights)
      : ProbabilityVector(SampleSpace(weights.size()), weights) {}

  /// Any positive finite weights, divided by their sum.
  static ProbabilityVector from_unnormalized(SampleSpace space,
                                             std::vector<double> weights) {
    if (weights.size() != space.size())
      throw SpaceMismatch("ProbabilityVector: weight count differs from "
                          "sample space size");
    ProbabilityVector p(std::move(space));
    p.weights_ = std::move(weights);
    const double s = checked_sum(p.weights_);
    p.finish(s);
    return p;
  }
  static ProbabilityVector from_unnormalized(std::vector<double> weights) {
    SampleSpace space(weights.size());
    return from_unnormalized(std::move(space), std::move(weights));
  }

  /// exp(v - logsumexp(v)); the shift keeps large log weights finite.
  static ProbabilityVector from_log_weights(SampleSpace space,
                                            std::span<const double> log_w) {
    if (log_w.size() != space.size())
      throw SpaceMismatch("ProbabilityVector: weight count differs from "
                          "sample space size");
    const double lse = calculus::logsumexp(log_w);
    if (!std::isfinite(lse))
      throw DomainError("ProbabilityVector: non-finite log weights");
    std::vector<double> w(log_w.size());
    for (std::size_t i = 0; i < w.size(); ++i)
      w[i] = std::exp(log_w[i] - lse);
    return from_unnormalized(std::move(space), std::move(w));
  }
  static ProbabilityVector from_log_weights(std::span<const double> log_w) {
    return from_log_weights(SampleSpace(log_w.size()), log_w);
  }

  static ProbabilityVector uniform(SampleSpace space) {
    const std::size_t n = space.size();
    return ProbabilityVector(std::move(space),
                             std::vector<double>(n, 1.0 / double(n)));
  }
  static ProbabilityVector uniform(std::size_t n) {
    return uniform(SampleSpace(n));
  }

  [[nodiscard]] const SampleSpace &space() const noexcept { return space_; }
  [[nodiscard]] std::size_t size() const noexcept { return weights_.size(); }
  [[nodiscard]] std::span<const double> weights() const noexcept {
    return weights_;
  }
  [[nodiscard]] double operator[](std::size_t i) const { return weights_[i]; }

  [[nodiscard]] std::vector<double> log_weights() const {
    std::vector<double> v(weights_.size());
    std::transform(weights_.begin(), weights_.end(), v.begin(),
                   [](double w) { return std::log(w); });
    return v;
  }

private:
  explicit ProbabilityVector(SampleSpace space) : space_(std::move(space)) {}

  static double checked_sum(std::span<const double> w) {
    double s = 0.0;
    for (double x : w) {
      if (!std::isfinite(x) || x <= 0.0)
        throw DomainError("ProbabilityVector: weights must be finite and "
                          "strictly positive");
      s += x;
    }
    return s;
  }

  void finish(double sum) {
    for (double &w : weights_) {
      w /= sum;
      if (!(w > kWeightFloor))
        throw DomainError("ProbabilityVector: weight below the positivity "
                          "floor");
    }
  }

  SampleSpace space_;
  std::vector<double> weights_;
};

/// Max-norm distance; infinite across different sample spaces.
inline double distance(const ProbabilityVector &p, const ProbabilityVector &q) {
  if (!(p.space() == q.space()))
    return std::numeric_limits<double>::infinity();
  return calculus::max_abs_diff(p.weights(), q.weights());
}

inline bool operator==(const ProbabilityVector &p, const ProbabilityVector &q) {
  return distance(p, q) <= kPointTolerance;
}

inline void require_same_space(const SampleSpace &a, const SampleSpace &b,
                               const char *where) {
  if (!(a == b))
    throw SpaceMismatch(std::string(where) + ": sample spaces differ");
}

/// Real function on the sample space, not necessarily centered.
class RandomVariable {
public:
  RandomVariable(SampleSpace space, std::vector<double> values)
      : space_(std::move(space)), values_(std::move(values)) {
    if (values_.size() != space_.size())
      throw SpaceMismatch("RandomVariable: value count differs from sample "
                          "space size");
    for (double v : values_)
      if (!std::isfinite(v))
        throw DomainError("RandomVariable: values must be finite");
  }
  explicit RandomVariable(const std::vector<double> &values)
      : RandomVariable(SampleSpace(values.size()), values) {}

  [[nodiscard]] const SampleSpace &space() const noexcept { return space_; }
  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] std::span<const double> values() const noexcept {
    return values_;
  }
  [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }

private:
  SampleSpace space_;
  std::vector<double> values_;
};

/// E_p[v] for a raw vector of values.
inline double expectation(const ProbabilityVector &p,
                          std::span<const double> v) {
  if (v.size() != p.size())
    throw SpaceMismatch("expectation: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    s += p[i] * v[i];
  return s;
}

inline double expectation(const ProbabilityVector &p, const RandomVariable &f) {
  require_same_space(p.space(), f.space(), "expectation");
  return expectation(p, f.values());
}

inline double variance(const ProbabilityVector &p, std::span<const double> v) {
  const double m = expectation(p, v);
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    s += p[i] * (v[i] - m) * (v[i] - m);
  return s;
}

/// Element U of the fiber S_p: E_p[U] = 0. The base point travels with
/// the value so that arithmetic across fibers is caught at run time.
class FiberVector {
public:
  /// Values must already be centered up to kDriftTolerance (relative to
  /// their magnitude); the residual mean is subtracted.
  FiberVector(ProbabilityVector base, std::vector<double> values)
      : base_(std::move(base)), values_(std::move(values)) {
    if (values_.size() != base_.size())
      throw SpaceMismatch("FiberVector: value count differs from base size");
    for (double v : values_)
      if (!std::isfinite(v))
        throw DomainError("FiberVector: values must be finite");
    const double m = expectation(base_, values_);
    const double scale = std::max(1.0, calculus::max_abs(values_));
    if (std::abs(m) > kDriftTolerance * scale)
      throw DomainError("FiberVector: values are not centered at the base (" +
                        std::to_string(m) + ")");
    for (double &v : values_)
      v -= m;
  }

  static FiberVector zero(ProbabilityVector base) {
    const std::size_t n = base.size();
    return FiberVector(std::move(base), std::vector<double>(n, 0.0));
  }

  [[nodiscard]] const ProbabilityVector &base() const noexcept { return base_; }
  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] std::span<const double> values() const noexcept {
    return values_;
  }
  [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }

  friend FiberVector operator+(const FiberVector &a, const FiberVector &b) {
    a.require_same_base(b);
    std::vector<double> v(a.values_);
    for (std::size_t i = 0; i < v.size(); ++i)
      v[i] += b.values_[i];
    return FiberVector(a.base_, std::move(v));
  }
  friend FiberVector operator-(const FiberVector &a, const FiberVector &b) {
    a.require_same_base(b);
    std::vector<double> v(a.values_);
    for (std::size_t i = 0; i < v.size(); ++i)
      v[i] -= b.values_[i];
    return FiberVector(a.base_, std::move(v));
  }
  friend FiberVector operator*(double c, const FiberVector &a) {
    std::vector<double> v(a.values_);
    for (double &x : v)
      x *= c;
    return FiberVector(a.base_, std::move(v));
  }
  friend FiberVector operator-(const FiberVector &a) { return -1.0 * a; }

  void require_same_base(const FiberVector &other) const {
    if (!(base_ == other.base_))
      throw BaseMismatch("fiber vectors are attached to different base "
                         "points");
  }

private:
  ProbabilityVector base_;
  std::vector<double> values_;
};

/// f - E_p[f] as a fiber at p.
inline FiberVector center(std::span<const double> f,
                          const ProbabilityVector &p) {
  const double m = expectation(p, f);
  std::vector<double> v(f.begin(), f.end());
  for (double &x : v)
    x -= m;
  return FiberVector(p, std::move(v));
}

inline FiberVector center(const RandomVariable &f, const ProbabilityVector &p) {
  require_same_space(f.space(), p.space(), "center");
  return center(f.values(), p);
}

/// <U, V>_p = E_p[U V].
inline double inner_product(const FiberVector &u, const FiberVector &v) {
  u.require_same_base(v);
  const ProbabilityVector &p = u.base();
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i)
    s += u[i] * v[i] * p[i];
  return s;
}

inline double squared_norm(const FiberVector &u) { return inner_product(u, u); }
inline double norm(const FiberVector &u) { return std::sqrt(squared_norm(u)); }

/// Shannon entropy -sum p log p.
inline double entropy(const ProbabilityVector &p) {
  double h = 0.0;
  for (double w : p.weights())
    h -= w * std::log(w);
  return h;
}

/// Kullback-Leibler divergence KL(p || q) = sum p log(p/q).
inline double kl(const ProbabilityVector &p, const ProbabilityVector &q) {
  require_same_space(p.space(), q.space(), "kl");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    s += p[i] * std::log(p[i] / q[i]);
  return std::max(s, 0.0);
}

/// A curve t -> p(t) in the open simplex.
using Curve = std::function<ProbabilityVector(double)>;

template <class C>
concept CurveLike = std::invocable<const C &, double> &&
    std::convertible_to<std::invoke_result_t<const C &, double>,
                        ProbabilityVector>;

namespace detail {

template <CurveLike C>
ProbabilityVector sample_curve(const C &curve, double t) {
  try {
    return curve(t);
  } catch (const DomainEscape &) {
    throw;
  } catch (const Error &e) {
    throw DomainEscape(std::string("curve left the open simplex: ") + e.what(),
                       t);
  }
}

} // namespace detail

/// Score d/dt log p(t) by a central difference with step h, re-centered at
/// p(t). The error is O(h^2).
template <CurveLike C>
FiberVector score_of_curve(const C &curve, double t, double h = 1e-4) {
  if (!(h > 0.0))
    throw DomainError("score_of_curve: step must be positive");
  ProbabilityVector p = detail::sample_curve(curve, t);
  const ProbabilityVector plus = detail::sample_curve(curve, t + h);
  const ProbabilityVector minus = detail::sample_curve(curve, t - h);
  require_same_space(plus.space(), p.space(), "score_of_curve");
  require_same_space(minus.space(), p.space(), "score_of_curve");
  std::vector<double> d(p.size());
  for (std::size_t i = 0; i < d.size(); ++i)
    d[i] = (std::log(plus[i]) - std::log(minus[i])) / (2.0 * h);
  return center(d, p);
}

} // namespace infogeo
