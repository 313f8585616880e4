#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "afne/space.hpp"

namespace afne {

class ProjectionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Box {
  Vector lower;
  Vector upper;
};

/// Coordinates tied together in equality classes, some classes pinned to a
/// value. Covers coordinate subspaces, the images {(a,a,*,...)} of swap
/// projections, single points and their intersections.
class AffineEqual {
 public:
  struct Class {
    std::vector<Index> members;  // sorted
    std::optional<double> value;
  };

  AffineEqual() = default;

  /// Whole space R^dim.
  static AffineEqual whole(Index dim);

  /// Validates disjoint groups and consistent fixed values.
  static AffineEqual make(Index dim, const std::vector<std::vector<Index>>& groups,
                          const std::vector<std::pair<Index, double>>& fixed = {});

  /// Merges overlapping groups; nullopt when the constraints are contradictory.
  static std::optional<AffineEqual> build(Index dim, const std::vector<std::vector<Index>>& groups,
                                          const std::vector<std::pair<Index, double>>& fixed);

  Index dim() const { return dim_; }
  const std::vector<Class>& classes() const { return classes_; }

  /// Groups and fixed coordinates equivalent to the stored classes.
  std::vector<std::vector<Index>> groups() const;
  std::vector<std::pair<Index, double>> fixed() const;

  /// Number of free real parameters of the set.
  Index degrees_of_freedom() const;

 private:
  Index dim_ = 0;
  std::vector<Class> classes_;
};

std::optional<AffineEqual> intersect(const AffineEqual& a, const AffineEqual& b);

/// Closed ball of the l_p norm with exponent `p`.
struct Ball {
  Vector center;
  double radius = 1.0;
  double p = 2.0;
};

/// {y : <normal, y> <= offset}
struct Halfspace {
  Vector normal;
  double offset = 0.0;
};

class ConvexSet {
 public:
  using Variant = std::variant<Box, AffineEqual, Ball, Halfspace>;

  static ConvexSet box(Vector lower, Vector upper);
  static ConvexSet affine_equal(AffineEqual set) { return ConvexSet(std::move(set)); }
  static ConvexSet ball(Vector center, double radius, double p);
  static ConvexSet halfspace(Vector normal, double offset);

  Index dim() const;
  const Variant& kind() const { return v_; }

  /// Largest constraint violation at x (0 inside the set).
  double violation(const Vector& x) const;
  bool contains(const Vector& x, double tol = 1e-10) const { return violation(x) <= tol; }

 private:
  explicit ConvexSet(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

/// Root of a nondecreasing function on [lo, hi] by bisection. Stops once
/// |f| <= tol or the bracket collapses to adjacent doubles; throws
/// ProjectionError if neither happens within `budget` halvings.
double bisect_increasing(const std::function<double(double)>& f, double lo, double hi, double tol,
                         int budget);

/// argmin_a sum_i |values_i - a|^p, by bisection on the derivative.
double power_mean_center(const std::vector<double>& values, double p, double tol = 1e-12,
                         int budget = 200);

/// Best approximation of x in C with respect to ||.||_p.
Vector project(const ConvexSet& C, const Vector& x, const SpaceParams& sp, double tol = 1e-12);

/// ||x-y||^r - ||x-P_C x||^r - (c_r/2)||P_C x - y||^r for y in C.
double projection_inequality_residual(const ConvexSet& C, const Vector& x, const Vector& y,
                                      const SpaceParams& sp);

/// (1/c_r)(||x-P_C y||^r + ||y-P_C x||^r - ||x-P_C x||^r - ||y-P_C y||^r) - ||P_C x - P_C y||^r.
double projection_pair_residual(const ConvexSet& C, const Vector& x, const Vector& y,
                                const SpaceParams& sp);

}  // namespace afne
