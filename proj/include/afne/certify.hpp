#pragma once

// Sampled falsification of the defining inequalities. A passing report means
// no counterexample was found on the sampled pairs at the given tolerance; it
// is not a proof.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "afne/operators.hpp"
#include "afne/projections.hpp"
#include "afne/space.hpp"

namespace afne {

enum class Property { nonexpansive, alpha_firm, quasi_alpha_firm, bruck_firm };

std::string to_string(Property p);
Property parse_property(const std::string& name);

struct Distribution {
  enum class Kind { uniform_box, gaussian };
  Kind kind = Kind::uniform_box;
  double low = -10.0;
  double high = 10.0;
  double stddev = 1.0;

  static Distribution uniform(double low, double high) { return {Kind::uniform_box, low, high, 1.0}; }
  static Distribution gaussian(double stddev) { return {Kind::gaussian, 0.0, 0.0, stddev}; }
};

/// Points with ||x - center||_p > radius.
struct OutsideBall {
  Vector center;
  double radius = 1.0;
  double p = 2.0;
};

/// Seeded point generator. Unconstrained draws follow the distribution;
/// constrained draws land exactly in the region (affine-equal sets are
/// parametrized, balls sampled radially, halfspace violators pushed inside).
class Sampler {
 public:
  using Constraint = std::variant<std::monostate, ConvexSet, OutsideBall>;

  Sampler(std::uint64_t seed, Index dim, Distribution dist = {}, Constraint constraint = {});

  Vector draw();
  Index dim() const { return dim_; }
  std::uint64_t seed() const { return seed_; }

 private:
  double draw_scalar();
  Vector draw_free();

  std::uint64_t seed_;
  Index dim_;
  Distribution dist_;
  Constraint constraint_;
  std::mt19937_64 rng_;
};

/// Sampler over Fix T, from the operator's fixed-set metadata.
Sampler fixed_set_sampler(const OperatorExpr& T, std::uint64_t seed, Distribution dist = {});

struct CertReport {
  Property property = Property::alpha_firm;
  std::size_t samples = 0;
  /// Pairs with (Id-T)x = (Id-T)y, skipped for the alpha estimate.
  std::size_t degenerate = 0;
  std::optional<double> alpha;  // tested constant, when the property has one
  double tolerance = 0.0;
  /// Raw residual at the pair with the smallest normalized residual.
  double worst_residual = 0.0;
  /// min over pairs of residual / max(||x-y||^r, 1).
  double worst_relative = 0.0;
  std::optional<std::pair<Vector, Vector>> witness;
  /// sup over pairs of the smallest alpha the pair allows.
  std::optional<double> estimated_min_alpha;
  /// Some pair had ||Tx-Ty|| >= ||x-y|| with (Id-T)x != (Id-T)y, so no
  /// alpha in (0,1) fits it.
  bool alpha_unattainable = false;
  /// Bruck checks: grid points that passed and the constants they imply.
  std::vector<double> w_grid;
  std::vector<bool> w_passed;
  std::vector<double> implied_alphas;
  bool passed = false;
};

inline constexpr double kDefaultCertTolerance = 1e-9;

/// ||x-y||^r - (c_r/2)((1-a)/a)||(Id-T)x - (Id-T)y||^r - ||Tx-Ty||^r
double firm_residual(const OperatorExpr& T, const Vector& x, const Vector& y, double alpha,
                     const SpaceParams& sp);

/// Residual of the alpha-firm inequality for x drawn from `domain` and y from
/// `codomain`.
CertReport certify_alpha_firm(const OperatorExpr& T, double alpha, const SpaceParams& sp,
                              Sampler& domain, Sampler& codomain, std::size_t n,
                              double tol = kDefaultCertTolerance);
CertReport certify_alpha_firm(const OperatorExpr& T, double alpha, const SpaceParams& sp,
                              Sampler& sampler, std::size_t n, double tol = kDefaultCertTolerance);

/// ||Tx - y||^r <= ||x - y||^r - (c_r/2)((1-a)/a)||Tx - x||^r for y in Fix T.
/// Requires fixed-set metadata on T.
CertReport certify_quasi_alpha_firm(const OperatorExpr& T, double alpha, const SpaceParams& sp,
                                    Sampler& fix_sampler, Sampler& x_sampler, std::size_t n,
                                    double tol = kDefaultCertTolerance);

/// Worst ||x-y|| - ||Tx-Ty||, relative to max(||x-y||, 1).
CertReport certify_nonexpansive(const OperatorExpr& T, double p, Sampler& sampler, std::size_t n,
                                double tol = kDefaultCertTolerance);

/// ||(1-w)x + wTx - ((1-w)y + wTy)||_p
double bruck_phi(const OperatorExpr& T, const Vector& x, const Vector& y, double w, double p);

std::vector<double> default_w_grid();

/// phi(1) <= phi(w) for every grid w on every sampled pair.
CertReport certify_bruck_firm(const OperatorExpr& T, double p, Sampler& sampler,
                              const std::vector<double>& w_grid, std::size_t n,
                              double tol = kDefaultCertTolerance);

}  // namespace afne
