#pragma once

// Feasibility through contractive projections P = (Id + U)/2, where U is an
// involutive isometry of l_p. Fix P is the fixed subspace of U.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "afne/certify.hpp"
#include "afne/dynamics.hpp"
#include "afne/operators.hpp"
#include "afne/projections.hpp"
#include "afne/space.hpp"

namespace afne {

struct ContractiveProjectionSpec {
  OperatorExpr isometry;
  OperatorExpr projection;  // (Id + U)/2
  OperatorExpr complement;  // (Id - U)/2
  /// Fix U = image of P, when it has an affine-equal description.
  std::optional<AffineEqual> image;
};

struct IsometryCheckOptions {
  std::uint64_t seed = 0;
  std::size_t samples = 256;
  Distribution dist = Distribution::uniform(-10.0, 10.0);
  double involution_tol = 1e-12;
  double norm_tol = 1e-12;
  double idempotence_tol = 1e-10;
};

class IsometryRejected : public std::runtime_error {
 public:
  IsometryRejected(const std::string& what, Vector witness)
      : std::runtime_error(what), witness_(std::move(witness)) {}
  const Vector& witness() const { return witness_; }

 private:
  Vector witness_;
};

class EmptyIntersection : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Checks U^2 = Id, ||Ux|| = ||x||, P^2 = P and nonexpansiveness of P and
/// Id - P on samples (tolerances relative to max(1, ||x||)), then builds the spec.
ContractiveProjectionSpec projection_from_isometry(const OperatorExpr& U, const SpaceParams& sp,
                                                   Index dim, const IsometryCheckOptions& opts = {});

/// Swap(0,1) and Swap(1,2) on l_p^dim. The common fixed set is {(a,a,a,*)}.
std::vector<ContractiveProjectionSpec> swap_pair_instance(const SpaceParams& sp, Index dim = 4);

/// Intersection of the image descriptors. nullopt when the descriptors are
/// contradictory; throws std::invalid_argument when one is missing.
std::optional<AffineEqual> intersect_images(const std::vector<ContractiveProjectionSpec>& specs);

struct FeasibilityOptions {
  StopRule stop{1e-13, 10000};
  /// Intersection points drawn for Fejer monitoring.
  std::size_t tracked = 5;
  std::uint64_t seed = 0;
  /// Known point of the intersection, required when some image is unknown.
  std::optional<Vector> witness;
};

struct FeasibilityResult {
  Trajectory trajectory;
  std::optional<AffineEqual> intersection;
  /// ||P_i x_N - x_N||_p for each spec.
  std::vector<double> membership_residuals;
  /// Largest Fejer increase, see fejer_violation.
  double fejer_violation = 0.0;
};

/// x_{n+1} = P_m ... P_1 x_n.
FeasibilityResult alternating_projections(const std::vector<ContractiveProjectionSpec>& specs,
                                          const Vector& x0, const SpaceParams& sp,
                                          const FeasibilityOptions& opts = {});

/// x_{n+1} = sum_i w_i P_i x_n with every w_i in (0,1).
FeasibilityResult averaged_projections(const std::vector<ContractiveProjectionSpec>& specs,
                                       const std::vector<double>& weights, const Vector& x0,
                                       const SpaceParams& sp, const FeasibilityOptions& opts = {});

struct FixedSetCheck {
  std::size_t samples = 0;
  /// max ||Tz - z||_p over sampled z in the intersection.
  double composed_residual = 0.0;
  double averaged_residual = 0.0;
  /// max ||P_i x - x||_p over limits of the composition from random starts.
  double limit_membership = 0.0;
  bool passed = false;
};

/// Compares Fix(P_m...P_1) and Fix(mean of P_i) with the intersection of the
/// images. Fixed points are checked to tol, iteration limits to limit_tol.
FixedSetCheck fixed_set_equality_check(const std::vector<ContractiveProjectionSpec>& specs,
                                       const SpaceParams& sp, std::uint64_t seed, std::size_t n,
                                       double tol = 1e-10, double limit_tol = 1e-8);

}  // namespace afne
