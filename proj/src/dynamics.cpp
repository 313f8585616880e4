#include "afne/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "afne/certify.hpp"
#include "csv_format.hpp"

namespace afne {

void StopRule::validate() const {
  if (!(step_tol > 0.0)) throw std::invalid_argument("step_tol must be positive");
  if (max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");
}

std::string to_string(StopReason r) { return r == StopReason::step_tol ? "step_tol" : "max_iter"; }

Trajectory picard_iterate(const OperatorExpr& T, const Vector& x0, const StopRule& stop,
                          const MonitorConfig& monitors, const SpaceParams& sp) {
  stop.validate();
  check_finite(x0);
  if (T.dim() != 0 && T.dim() != x0.size()) {
    throw std::invalid_argument("starting point dimension does not match the operator");
  }
  const auto& fixed_set = T.meta().fixed_set;
  if (fixed_set && fixed_set->dim() != x0.size()) {
    throw std::invalid_argument("fixed-set metadata dimension does not match the starting point");
  }

  Trajectory tr;
  tr.tracked_points = monitors.tracked_points;
  if (monitors.auto_track > 0 && fixed_set) {
    Sampler s = fixed_set_sampler(T, monitors.seed);
    for (std::size_t k = 0; k < monitors.auto_track; ++k) tr.tracked_points.push_back(s.draw());
  }
  for (const auto& y : tr.tracked_points) check_same_size(y, x0);
  tr.fejer_distances.resize(tr.tracked_points.size());

  std::optional<ConvexSet> fix_region;
  if (fixed_set && monitors.project_onto_fixed_set) fix_region = ConvexSet::affine_equal(*fixed_set);

  auto record = [&](const Vector& x) {
    tr.iterates.push_back(x);
    for (std::size_t k = 0; k < tr.tracked_points.size(); ++k) {
      tr.fejer_distances[k].push_back(lp_norm((x - tr.tracked_points[k]).eval(), sp.p));
    }
    if (fix_region) tr.fix_projections.push_back(project(*fix_region, x, sp));
  };

  const double guard = monitors.overflow_factor * (1.0 + lp_norm(x0, sp.p));
  record(x0);
  Vector x = x0;
  for (std::size_t n = 0; n < stop.max_iter; ++n) {
    Vector next = T.apply(x);
    if (!next.allFinite()) {
      throw DivergenceError("iterate became non-finite at step " + std::to_string(n + 1),
                            std::move(tr));
    }
    const double step = lp_norm((next - x).eval(), sp.p);
    tr.step_norms.push_back(step);
    record(next);
    if (lp_norm(next, sp.p) > guard) {
      throw DivergenceError("iterate norm exceeded the overflow guard at step " +
                                std::to_string(n + 1),
                            std::move(tr));
    }
    if (step < stop.step_tol) {
      tr.converged = true;
      tr.stop_reason = StopReason::step_tol;
      return tr;
    }
    x = std::move(next);
  }
  tr.stop_reason = StopReason::max_iter;
  return tr;
}

double fejer_violation(const Trajectory& traj) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& d : traj.fejer_distances) {
    if (d.empty()) continue;
    const double scale = std::max(d.front(), 1.0);
    for (std::size_t n = 0; n + 1 < d.size(); ++n) worst = std::max(worst, (d[n + 1] - d[n]) / scale);
  }
  return worst;
}

bool RegularityReport::bounds_hold() const {
  return std::all_of(bounds.begin(), bounds.end(), [](const PointBound& b) { return b.holds; });
}

RegularityReport asymptotic_regularity_report(const Trajectory& traj, const OperatorMeta& meta,
                                              const SpaceParams& sp, double step_tol,
                                              double rel_slack) {
  if (traj.iterates.empty()) throw std::invalid_argument("empty trajectory");
  RegularityReport rep;
  rep.step_norms = traj.step_norms;
  rep.final_step = traj.step_norms.empty() ? 0.0 : traj.step_norms.back();
  rep.regular = rep.final_step < step_tol;
  if (!meta.alpha_firm) {
    rep.note = "no alpha metadata; telescoping bound not checked";
    return rep;
  }
  if (traj.tracked_points.empty()) {
    rep.note = "no tracked fixed points; telescoping bound not checked";
    return rep;
  }
  rep.bound_checked = true;
  rep.alpha = *meta.alpha_firm;
  rep.constant = 2.0 * rep.alpha / (sp.c_r * (1.0 - rep.alpha));
  double lhs = 0.0;
  for (double s : traj.step_norms) lhs += pow_abs(s, sp.r);
  for (const auto& d : traj.fejer_distances) {
    RegularityReport::PointBound b;
    const double first = pow_abs(d.front(), sp.r);
    const double last = pow_abs(d.back(), sp.r);
    b.lhs = lhs;
    b.rhs = rep.constant * (first - last);
    b.slack = rel_slack * std::max(first, 1.0);
    b.holds = b.lhs <= b.rhs + b.slack;
    rep.bounds.push_back(b);
  }
  return rep;
}

ResolventResult resolvent_apply(const OperatorExpr& F, double lambda, const Vector& x,
                                const ResolventOptions& opts) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::domain_error("resolvent parameter must be nonnegative");
  }
  check_finite(x);
  if (lambda == 0.0) return {x, 0, 0.0};
  const double a = 1.0 / (1.0 + lambda);
  const double q = lambda / (1.0 + lambda);
  // error <= residual / (1 - q); the floor keeps the test above rounding noise
  const double scale = std::max(1.0, lp_norm(x, opts.p));
  const double threshold =
      std::max(opts.tol * (1.0 - q), 8.0 * std::numeric_limits<double>::epsilon()) * scale;
  Vector y = x;
  for (std::size_t k = 0; k < opts.max_iter; ++k) {
    Vector gy = a * x + q * F.apply(y);
    const double residual = lp_norm((y - gy).eval(), opts.p);
    if (residual <= threshold) return {std::move(y), k, residual};
    y = std::move(gy);
  }
  throw ResolventError("resolvent iteration exceeded " + std::to_string(opts.max_iter) +
                       " steps; F is probably not nonexpansive");
}

OperatorExpr resolvent_operator(const OperatorExpr& F, double lambda, const SpaceParams& sp,
                                double tol) {
  if (!(lambda > 0.0)) throw std::domain_error("resolvent operator needs lambda > 0");
  return resolvent_of(F, lambda, sp, tol);
}

OperatorExpr semigroup_product(const OperatorExpr& F, double t, std::size_t n,
                               const SpaceParams& sp, double tol) {
  if (!(t > 0.0) || !std::isfinite(t)) throw std::domain_error("semigroup time must be positive");
  if (n < 1) throw std::invalid_argument("semigroup product needs n >= 1");
  const OperatorExpr step = resolvent_operator(F, t / static_cast<double>(n), sp, tol);
  return compose(std::vector<OperatorExpr>(n, step), sp);
}

SemigroupEstimate semigroup_limit_estimate(const OperatorExpr& F, double t, const Vector& x,
                                           const std::vector<std::size_t>& schedule, double tol,
                                           const SpaceParams& sp, double resolvent_tol) {
  if (schedule.empty()) throw std::invalid_argument("empty schedule");
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    if (schedule[k] < 1 || (k > 0 && schedule[k] <= schedule[k - 1])) {
      throw std::invalid_argument("schedule must be strictly increasing and start at n >= 1");
    }
  }
  if (!(t >= 0.0)) throw std::domain_error("semigroup time must be nonnegative");
  SemigroupEstimate est;
  est.schedule = schedule;
  for (std::size_t n : schedule) {
    Vector v = t == 0.0 ? x : semigroup_product(F, t, n, sp, resolvent_tol).apply(x);
    est.differences.push_back(est.values.empty()
                                  ? std::numeric_limits<double>::quiet_NaN()
                                  : lp_norm((v - est.values.back()).eval(), sp.p));
    est.values.push_back(std::move(v));
  }
  est.limit = est.values.back();
  bool monotone = true;
  for (std::size_t k = 2; k < est.differences.size(); ++k) {
    monotone = monotone && est.differences[k] <= est.differences[k - 1];
  }
  const double last = est.differences.size() > 1 ? est.differences.back() : 0.0;
  est.cauchy = monotone && last <= tol;
  return est;
}

SemigroupAxioms semigroup_axioms(const OperatorExpr& F, double tau, double s, double t,
                                 std::size_t n, const Vector& x, const Vector& y,
                                 const SpaceParams& sp) {
  SemigroupAxioms ax;
  ax.small_time_gap = lp_norm((semigroup_product(F, tau, n, sp).apply(x) - x).eval(), sp.p);
  const Vector st = semigroup_product(F, s, n, sp).apply(semigroup_product(F, t, n, sp).apply(x));
  ax.composition_gap = lp_norm((st - semigroup_product(F, s + t, n, sp).apply(x)).eval(), sp.p);
  const OperatorExpr Tt = semigroup_product(F, t, n, sp);
  ax.expansion = lp_norm((Tt.apply(x) - Tt.apply(y)).eval(), sp.p) - lp_norm((x - y).eval(), sp.p);
  return ax;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  using detail::format_double;
  const Index d = traj.iterates.empty() ? 0 : traj.iterates.front().size();
  const bool with_proj = !traj.fix_projections.empty();
  os << "n";
  for (Index i = 0; i < d; ++i) os << ",x_" << i + 1;
  os << ",step_norm";
  for (std::size_t k = 0; k < traj.fejer_distances.size(); ++k) os << ",fejer_dist_" << k + 1;
  if (with_proj) {
    for (Index i = 0; i < d; ++i) os << ",fix_proj_" << i + 1;
  }
  os << '\n';
  for (std::size_t n = 0; n < traj.iterates.size(); ++n) {
    os << n;
    for (Index i = 0; i < d; ++i) os << ',' << format_double(traj.iterates[n][i]);
    os << ',';
    if (n > 0) os << format_double(traj.step_norms[n - 1]);
    for (const auto& dist : traj.fejer_distances) os << ',' << format_double(dist[n]);
    if (with_proj) {
      for (Index i = 0; i < d; ++i) os << ',' << format_double(traj.fix_projections[n][i]);
    }
    os << '\n';
  }
}

}  // namespace afne
