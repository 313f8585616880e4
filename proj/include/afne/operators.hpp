#pragma once

// Operator expressions on truncated l_p with constants carried through the
// calculus of (quasi) alpha-firmly nonexpansive and alpha-averaged maps.

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "afne/projections.hpp"
#include "afne/space.hpp"

namespace afne {

enum class Proof { unknown, proven };

/// Facts about an operator that follow from how it was built. Nothing here is
/// estimated: every constant comes from a construction rule.
struct OperatorMeta {
  Proof nonexpansive = Proof::unknown;
  /// T is alpha-firmly nonexpansive with this constant.
  std::optional<double> alpha_firm;
  /// T = (1-a) Id + a R with R proven nonexpansive.
  std::optional<double> averaged_alpha;
  /// Exact description of Fix T.
  std::optional<AffineEqual> fixed_set;
};

enum class Activation { relu, tanh, identity };

Activation parse_activation(const std::string& name);
std::string to_string(Activation a);

struct OperatorNode;

/// Immutable, cheaply copyable handle to an operator expression tree.
class OperatorExpr {
 public:
  explicit OperatorExpr(std::shared_ptr<const OperatorNode> node);

  /// Evaluates the expression at x. Throws std::invalid_argument on a
  /// dimension mismatch or non-finite input.
  Vector apply(const Vector& x) const;
  Vector operator()(const Vector& x) const { return apply(x); }

  const OperatorMeta& meta() const;
  /// Required input dimension, 0 when the operator acts on any dimension.
  Index dim() const;
  const OperatorNode& node() const { return *node_; }
  std::string kind_name() const;

 private:
  std::shared_ptr<const OperatorNode> node_;
};

namespace expr {
struct Identity {};
struct Affine {
  Matrix W;
  Vector b;
};
struct Scale {
  double lambda = 1.0;
};
struct Truncate {
  Index k = 1;
};
struct Swap {
  Index i = 0;
  Index j = 1;
};
struct Act {
  Activation fn = Activation::identity;
};
struct Averaged {
  OperatorExpr inner;
  double alpha;
};
/// ops[0] is applied last: Compose{A, B} x = A(B(x)).
struct Compose {
  std::vector<OperatorExpr> ops;
};
struct ConvexCombo {
  std::vector<OperatorExpr> ops;
  std::vector<double> weights;
};
struct Resolvent {
  OperatorExpr inner;
  double lambda;
  double p;
  double tol;
  std::size_t max_iter;
};
/// (Id + U)/2 for an involutive isometry U.
struct ContractiveProjection {
  OperatorExpr isometry;
};
}  // namespace expr

struct OperatorNode {
  using Kind = std::variant<expr::Identity, expr::Affine, expr::Scale, expr::Truncate, expr::Swap,
                            expr::Act, expr::Averaged, expr::Compose, expr::ConvexCombo,
                            expr::Resolvent, expr::ContractiveProjection>;
  Kind kind;
  Index dim = 0;
  OperatorMeta meta;
};

// ---- constant propagation ---------------------------------------------------

/// (1 + (1-a_max)/(n^(r-1) a_max))^-1 for an n-fold composition.
double composition_firm_constant(std::span<const double> alphas, double r);
/// 1 - prod(1 - a_i) for a composition of averaged maps.
double composition_averaged_constant(std::span<const double> alphas);
/// sum w_i a_i for a convex combination of averaged maps.
double combination_averaged_constant(std::span<const double> alphas, std::span<const double> weights);

/// ||W||_1^(1/p) ||W||_inf^(1-1/p), an upper bound on the induced l_p norm.
double interpolation_norm_bound(const Matrix& W, double p);

// ---- atoms ------------------------------------------------------------------

/// With dim > 0 the fixed set (the whole space) is recorded.
OperatorExpr identity(Index dim = 0);
/// x -> lambda x. With dim > 0 and lambda != 1, Fix = {0} is recorded.
OperatorExpr scale(double lambda, Index dim = 0);
/// x -> W x + b, W square. Nonexpansive is proven when the interpolation bound
/// is at most one. Signed-permutation involutions get their fixed set.
OperatorExpr affine(Matrix W, Vector b, const SpaceParams& sp);
/// Rescales W by max(1, interpolation bound) so the map is nonexpansive in l_p.
OperatorExpr guaranteed_nonexpansive_affine(const Matrix& W, const Vector& b, double p);
/// Keeps the first k coordinates, zeroes the rest; alpha = c_r/(c_r+2).
OperatorExpr truncation_operator(Index k, Index dim, const SpaceParams& sp);
/// Exchanges coordinates i and j (0-based).
OperatorExpr swap_isometry(Index i, Index j, Index dim);
/// Coordinatewise increasing, 1-Lipschitz map with sigma(0) = 0; alpha = 1/2.
OperatorExpr stable_activation(Activation fn);
OperatorExpr stable_activation(const std::string& name);

// ---- combinators ------------------------------------------------------------

/// (1-alpha) Id + alpha R.
OperatorExpr averaged(const OperatorExpr& R, double alpha);
/// ops.front() o ... o ops.back(), i.e. ops.back() is applied first.
OperatorExpr compose(const std::vector<OperatorExpr>& ops, const SpaceParams& sp);
OperatorExpr convex_combination(const std::vector<OperatorExpr>& ops,
                                const std::vector<double>& weights, const SpaceParams& sp);
/// (Id + U)/2. Meta assumes U is an involutive isometry; feasibility checks
/// that on samples before handing one out.
OperatorExpr contractive_projection(const OperatorExpr& U);
/// Resolvent node; see dynamics.hpp for the evaluation.
OperatorExpr resolvent_of(const OperatorExpr& F, double lambda, const SpaceParams& sp,
                          double tol = 1e-13, std::size_t max_iter = 1000000);

/// A_d sigma ... sigma A_1 for layers given in application order A_1..A_d.
/// Every layer must carry an alpha_firm constant.
OperatorExpr neural_network(const std::vector<OperatorExpr>& layers, const OperatorExpr& sigma,
                            const SpaceParams& sp);

}  // namespace afne
