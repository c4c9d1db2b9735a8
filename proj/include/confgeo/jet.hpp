#pragma once

#include <array>
#include <vector>

#include "confgeo/errors.hpp"

namespace confgeo {

/// Truncated multivariate Taylor expansion ("jet") of a scalar function of up
/// to 4 variables, through total order 4. Coefficients store d^a f / a!, so the
/// constant term is the value and first-order coefficients are the gradient.
///
/// Arithmetic is exact on polynomials of total degree <= 4 and implements the
/// truncated product/quotient/composition rules otherwise. Immutable value
/// semantics; safe for concurrent use.
class Jet {
 public:
  static constexpr int kOrder = 4;
  static constexpr int kMaxVars = 4;

  Jet() = default;  // empty sentinel; any arithmetic on it throws

  static Jet constant(double value, int nvars);
  static Jet variable(int index, double value, int nvars);

  int nvars() const { return nv_; }
  bool empty() const { return nv_ == 0; }
  double value() const { return c_.empty() ? 0.0 : c_[0]; }

  /// Taylor coefficients in graded order (degree 0..4; deterministic layout).
  const std::vector<double>& coeffs() const { return c_; }

  /// Partial derivative d^alpha f (coefficient times alpha!). |alpha| <= 4.
  double extract(const std::array<int, 4>& alpha) const;
  double extract(std::initializer_list<int> alpha) const;

  /// Jet of the partial derivative along one axis. The result is valid to one
  /// order lower than the input; its top-order coefficients are zeroed.
  Jet derivative(int axis) const;

  Jet operator-() const;
  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);

  friend Jet operator+(const Jet& a, const Jet& b);
  friend Jet operator-(const Jet& a, const Jet& b);
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);

  friend Jet operator+(const Jet& a, double s);
  friend Jet operator+(double s, const Jet& a);
  friend Jet operator-(const Jet& a, double s);
  friend Jet operator-(double s, const Jet& a);
  friend Jet operator*(const Jet& a, double s);
  friend Jet operator*(double s, const Jet& a);
  friend Jet operator/(const Jet& a, double s);
  friend Jet operator/(double s, const Jet& a);

  friend Jet sin(const Jet& a);
  friend Jet cos(const Jet& a);
  friend Jet sinh(const Jet& a);
  friend Jet cosh(const Jet& a);
  friend Jet exp(const Jet& a);
  friend Jet log(const Jet& a);
  friend Jet sqrt(const Jet& a);
  friend Jet recip(const Jet& a);
  friend Jet pow(const Jet& a, double p);

  /// Univariate composition F(a) from the derivatives of F at a.value().
  static Jet compose(const Jet& a, const std::array<double, 5>& derivs);

 private:
  explicit Jet(int nvars);
  int nv_ = 0;
  std::vector<double> c_;
};

}  // namespace confgeo
