#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace infogeo {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Two fiber vectors attached to different base points were combined.
class BaseMismatch : public Error {
public:
  using Error::Error;
};

/// Objects living on different sample spaces were combined.
class SpaceMismatch : public Error {
public:
  using Error::Error;
};

/// A value lies outside the domain of the operation (non-positive weight,
/// eta outside the solid simplex, unnormalizable weights, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

/// A curve left the open simplex while being differentiated or integrated.
class DomainEscape : public Error {
public:
  explicit DomainEscape(const std::string &what, double t = 0.0)
      : Error(what), t_(t) {}
  [[nodiscard]] double t() const noexcept { return t_; }

private:
  double t_;
};

/// The integrator produced a non-finite state at time t().
class NumericalBlowup : public Error {
public:
  NumericalBlowup(const std::string &what, double t) : Error(what), t_(t) {}
  [[nodiscard]] double t() const noexcept { return t_; }

private:
  double t_;
};

/// A curve parameter is outside the admissible open interval (lo(), hi()).
class OutOfInterval : public Error {
public:
  OutOfInterval(const std::string &what, double lo, double hi)
      : Error(what + " (admissible interval: (" + std::to_string(lo) + ", " +
              std::to_string(hi) + "))"),
        lo_(lo), hi_(hi) {}
  [[nodiscard]] double lo() const noexcept { return lo_; }
  [[nodiscard]] double hi() const noexcept { return hi_; }

private:
  double lo_;
  double hi_;
};

/// A fiber vector that must have unit norm does not.
class NormError : public Error {
public:
  using Error::Error;
};

/// An embedding vector is not tangent to the simplex (its sum is not zero).
class TangencyError : public Error {
public:
  using Error::Error;
};

/// Argument outside the range of a deformed logarithm.
class RangeError : public Error {
public:
  using Error::Error;
};

} // namespace infogeo
