#pragma once

// Picard iteration with convergence monitors, resolvents and the
// exponential-formula products R_{t/n}^n.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "afne/operators.hpp"
#include "afne/space.hpp"

namespace afne {

struct StopRule {
  double step_tol = 1e-10;
  std::size_t max_iter = 100000;

  void validate() const;
};

struct MonitorConfig {
  /// Points of Fix T whose distance to the iterates is tracked.
  std::vector<Vector> tracked_points;
  /// Additional points drawn from the operator's fixed set metadata.
  std::size_t auto_track = 0;
  std::uint64_t seed = 0;
  /// Record P_{Fix T} x_n when the fixed set is known.
  bool project_onto_fixed_set = true;
  /// Abort when ||x_n|| > overflow_factor (1 + ||x_0||).
  double overflow_factor = 1e12;
};

enum class StopReason { step_tol, max_iter };
std::string to_string(StopReason r);

struct Trajectory {
  std::vector<Vector> iterates;
  /// step_norms[n] = ||x_{n+1} - x_n||_p
  std::vector<double> step_norms;
  std::vector<Vector> tracked_points;
  /// fejer_distances[k][n] = ||x_n - tracked_points[k]||_p
  std::vector<std::vector<double>> fejer_distances;
  /// P_{Fix T} x_n, empty when not recorded.
  std::vector<Vector> fix_projections;
  bool converged = false;
  StopReason stop_reason = StopReason::max_iter;

  std::size_t steps() const { return step_norms.size(); }
  const Vector& limit() const { return iterates.back(); }
};

class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, Trajectory partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const Trajectory& partial() const { return partial_; }

 private:
  Trajectory partial_;
};

/// x_{n+1} = T x_n until ||x_{n+1} - x_n||_p < step_tol or max_iter steps.
/// The final iterate is always stored, so steps() == iterates.size() - 1.
Trajectory picard_iterate(const OperatorExpr& T, const Vector& x0, const StopRule& stop,
                          const MonitorConfig& monitors, const SpaceParams& sp);

/// Largest increase ||x_{n+1} - y|| - ||x_n - y|| over all tracked y and n,
/// relative to max(||x_0 - y||, 1). Nonpositive up to rounding for
/// quasi-nonexpansive T.
double fejer_violation(const Trajectory& traj);

struct RegularityReport {
  struct PointBound {
    double lhs = 0.0;    // sum_n ||x_{n+1} - x_n||^r
    double rhs = 0.0;    // 2a/(c_r(1-a)) (||x_0-y||^r - ||x_N-y||^r)
    double slack = 0.0;  // allowed excess
    bool holds = false;
  };
  std::vector<double> step_norms;
  double final_step = 0.0;
  bool regular = false;
  bool bound_checked = false;
  double alpha = 0.0;
  double constant = 0.0;
  std::vector<PointBound> bounds;
  std::string note;

  bool bounds_hold() const;
};

/// Checks that the steps vanish and, when the meta carries alpha, the
/// telescoping bound obtained by summing the quasi alpha-firm inequality
///   ||x_{n+1} - x_n||^r <= 2a/(c_r(1-a)) (||x_n - y||^r - ||x_{n+1} - y||^r).
RegularityReport asymptotic_regularity_report(const Trajectory& traj, const OperatorMeta& meta,
                                              const SpaceParams& sp, double step_tol,
                                              double rel_slack = 1e-9);

// ---- resolvents ---------------------------------------------------------------

struct ResolventOptions {
  /// Bound on ||y - R_lambda x||_p, relative to max(1, ||x||_p).
  double tol = 1e-13;
  std::size_t max_iter = 1000000;
  double p = 2.0;
};

struct ResolventResult {
  Vector value;
  std::size_t iterations = 0;
  /// ||y - G(y)||_p at the returned y.
  double residual = 0.0;
};

class ResolventError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fixed point of y -> x/(1+lambda) + lambda/(1+lambda) F y by contraction
/// iteration started at x. lambda = 0 returns x.
ResolventResult resolvent_apply(const OperatorExpr& F, double lambda, const Vector& x,
                                const ResolventOptions& opts = {});

/// R_lambda as an operator expression, alpha = 1/2 when F is proven nonexpansive.
OperatorExpr resolvent_operator(const OperatorExpr& F, double lambda, const SpaceParams& sp,
                                double tol = 1e-13);

/// R_{t/n} composed n times.
OperatorExpr semigroup_product(const OperatorExpr& F, double t, std::size_t n,
                               const SpaceParams& sp, double tol = 1e-13);

struct SemigroupEstimate {
  std::vector<std::size_t> schedule;
  std::vector<Vector> values;
  /// differences[k] = ||values[k] - values[k-1]||_p, differences[0] = NaN
  std::vector<double> differences;
  bool cauchy = false;
  Vector limit;
};

/// Evaluates T_{n,t} x along an increasing schedule. `cauchy` is set when the
/// successive differences are nonincreasing and the last is at most tol.
SemigroupEstimate semigroup_limit_estimate(const OperatorExpr& F, double t, const Vector& x,
                                           const std::vector<std::size_t>& schedule, double tol,
                                           const SpaceParams& sp, double resolvent_tol = 1e-13);

/// Discrepancies of the semigroup axioms at a finite product size n.
struct SemigroupAxioms {
  double small_time_gap = 0.0;   // ||T_{n,tau} x - x||
  double composition_gap = 0.0;  // ||T_{n,s} T_{n,t} x - T_{n,s+t} x||
  double expansion = 0.0;        // ||T_{n,t} x - T_{n,t} y|| - ||x - y||
};

SemigroupAxioms semigroup_axioms(const OperatorExpr& F, double tau, double s, double t,
                                 std::size_t n, const Vector& x, const Vector& y,
                                 const SpaceParams& sp);

/// CSV: n, x_1..x_d, step_norm, fejer_dist_k..., then fix_proj_1..fix_proj_d
/// when projections were recorded. Numbers use 17 significant digits.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

}  // namespace afne
