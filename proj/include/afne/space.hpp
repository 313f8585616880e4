#pragma once

// Truncated l_p geometry: norms, the r-uniform convexity constants and the
// inequality residuals the rest of the library is checked against.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace afne {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Geometry constants of l_p viewed as an r-uniformly convex space.
///
/// `c_r` is the constant in
///   ||(1-w)x + wy||^r <= (1-w)||x||^r + w||y||^r - (c_r/2) w(1-w) ||x-y||^r,
/// `K` the constant of the midpoint form
///   ||(x+y)/2||^r + ||(x-y)/(2K)||^r <= (||x||^r + ||y||^r)/2.
struct SpaceParams {
  double p = 2.0;
  double r = 2.0;
  double c_r = 2.0;
  double K = 1.0;
};

inline void check_exponent(double p) {
  if (!std::isfinite(p) || !(p > 1.0)) {
    throw std::domain_error("l_p exponent must lie in (1, inf), got " + std::to_string(p));
  }
}

/// |t|^p, evaluated as exp(p ln|t|) with |0|^p = 0.
template <typename Scalar>
inline Scalar pow_abs(Scalar t, Scalar p) {
  using std::abs;
  using std::exp;
  using std::log;
  const Scalar a = abs(t);
  if (a == Scalar(0)) return Scalar(0);
  return exp(p * log(a));
}

template <typename Derived>
inline void check_finite(const Eigen::MatrixBase<Derived>& x) {
  if (!x.allFinite()) throw std::invalid_argument("vector has non-finite coordinates");
}

/// (sum |x_i|^p)^(1/p). Coordinates are rescaled by max|x_i| first so that
/// large or tiny entries do not overflow the power sum.
template <typename Derived>
typename Derived::Scalar lp_norm(const Eigen::MatrixBase<Derived>& x, typename Derived::Scalar p) {
  using Scalar = typename Derived::Scalar;
  using std::exp;
  using std::log;
  check_exponent(static_cast<double>(p));
  check_finite(x);
  const Scalar m = x.cwiseAbs().maxCoeff();
  if (m == Scalar(0)) return Scalar(0);
  Scalar sum(0);
  for (Index i = 0; i < x.size(); ++i) sum += pow_abs<Scalar>(x.coeff(i) / m, p);
  return m * exp(log(sum) / p);
}

/// ||x||_p^r.
template <typename Derived>
typename Derived::Scalar norm_pow(const Eigen::MatrixBase<Derived>& x, typename Derived::Scalar p,
                                  typename Derived::Scalar r) {
  return pow_abs(lp_norm(x, p), r);
}

template <typename Derived>
typename Derived::Scalar norm_pow(const Eigen::MatrixBase<Derived>& x, const SpaceParams& sp) {
  using Scalar = typename Derived::Scalar;
  return norm_pow(x, Scalar(sp.p), Scalar(sp.r));
}

/// Constants for l_p. For p >= 2 the power type is r = p with K = 1 and
/// c_r = 4/2^p; p = 2 takes the sharp Hilbert value c_2 = 2. For p in (1,2)
/// the space is 2-uniformly convex with K = 1/sqrt(p-1) and c_2 = 8/(2K)^2.
inline SpaceParams space_params(double p) {
  check_exponent(p);
  SpaceParams sp;
  sp.p = p;
  if (p == 2.0) {
    sp.r = 2.0;
    sp.K = 1.0;
    sp.c_r = 2.0;
  } else if (p > 2.0) {
    sp.r = p;
    sp.K = 1.0;
    sp.c_r = 4.0 / std::pow(2.0, p);
  } else {
    sp.r = 2.0;
    sp.K = 1.0 / std::sqrt(p - 1.0);
    sp.c_r = 8.0 / ((2.0 * sp.K) * (2.0 * sp.K));
  }
  return sp;
}

template <typename A, typename B>
inline void check_same_size(const Eigen::MatrixBase<A>& x, const Eigen::MatrixBase<B>& y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("dimension mismatch: " + std::to_string(x.size()) + " vs " +
                                std::to_string(y.size()));
  }
}

/// Scale used to make residuals relative: max(||x||^r, ||y||^r, 1).
template <typename A, typename B>
typename A::Scalar residual_scale(const Eigen::MatrixBase<A>& x, const Eigen::MatrixBase<B>& y,
                                  const SpaceParams& sp) {
  using Scalar = typename A::Scalar;
  return std::max({norm_pow(x, sp), norm_pow(y, sp), Scalar(1)});
}

/// (1-w)||x||^r + w||y||^r - (c_r/2) w(1-w)||x-y||^r - ||(1-w)x + wy||^r.
/// Nonnegative in an r-uniformly convex space; zero for p = 2.
template <typename A, typename B>
typename A::Scalar convexity_residual(const Eigen::MatrixBase<A>& x, const Eigen::MatrixBase<B>& y,
                                      typename A::Scalar w, const SpaceParams& sp) {
  using Scalar = typename A::Scalar;
  check_same_size(x, y);
  if (!(w >= Scalar(0) && w <= Scalar(1))) throw std::domain_error("weight w must lie in [0,1]");
  const Scalar one(1);
  const Scalar lhs = norm_pow(((one - w) * x + w * y).eval(), sp);
  const Scalar rhs = (one - w) * norm_pow(x, sp) + w * norm_pow(y, sp) -
                     Scalar(sp.c_r / 2.0) * w * (one - w) * norm_pow((x - y).eval(), sp);
  return rhs - lhs;
}

/// (||x||^r + ||y||^r)/2 - ||(x+y)/2||^r - ||(x-y)/(2K)||^r.
template <typename A, typename B>
typename A::Scalar ball_inequality_residual(const Eigen::MatrixBase<A>& x,
                                            const Eigen::MatrixBase<B>& y, const SpaceParams& sp) {
  using Scalar = typename A::Scalar;
  check_same_size(x, y);
  const Scalar half(0.5);
  return half * (norm_pow(x, sp) + norm_pow(y, sp)) - norm_pow((half * (x + y)).eval(), sp) -
         norm_pow(((x - y) / Scalar(2.0 * sp.K)).eval(), sp);
}

}  // namespace afne
