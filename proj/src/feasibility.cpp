#include "afne/feasibility.hpp"

#include <algorithm>
#include <cmath>

namespace afne {
namespace {

OperatorExpr complement_of(const OperatorExpr& U, const SpaceParams& sp) {
  return averaged(compose({scale(-1.0), U}, sp), 0.5);
}

void require_passed(const CertReport& rep, const std::string& what) {
  if (rep.passed) return;
  throw IsometryRejected(what, rep.witness ? rep.witness->first : Vector{});
}

Index spec_dim(const std::vector<ContractiveProjectionSpec>& specs) {
  if (specs.empty()) throw std::invalid_argument("no projections given");
  Index dim = 0;
  for (const auto& s : specs) {
    const Index d = s.projection.dim();
    if (d == 0) continue;
    if (dim != 0 && d != dim) throw std::invalid_argument("projections act on different dimensions");
    dim = d;
  }
  return dim;
}

double fixed_residual(const OperatorExpr& T, const Vector& x, double p) {
  return lp_norm((T.apply(x) - x).eval(), p);
}

struct Prepared {
  std::optional<AffineEqual> intersection;
  std::vector<Vector> tracked;
};

Prepared prepare(const std::vector<ContractiveProjectionSpec>& specs, const Vector& x0,
                 const SpaceParams& sp, const FeasibilityOptions& opts) {
  const Index dim = spec_dim(specs);
  if (dim != 0 && x0.size() != dim) {
    throw std::invalid_argument("starting point dimension does not match the projections");
  }
  Prepared out;
  const bool described =
      std::all_of(specs.begin(), specs.end(), [](const auto& s) { return s.image.has_value(); });
  if (described) {
    out.intersection = intersect_images(specs);
    if (!out.intersection) throw EmptyIntersection("the image sets have empty intersection");
    Sampler sampler(opts.seed, x0.size(), Distribution::uniform(-10.0, 10.0),
                    ConvexSet::affine_equal(*out.intersection));
    for (std::size_t k = 0; k < opts.tracked; ++k) out.tracked.push_back(sampler.draw());
  }
  if (opts.witness) {
    const Vector& w = *opts.witness;
    check_same_size(w, x0);
    const double tol = 1e-10 * std::max(1.0, lp_norm(w, sp.p));
    for (const auto& s : specs) {
      if (fixed_residual(s.projection, w, sp.p) > tol) {
        throw EmptyIntersection("the witness point is not fixed by every projection");
      }
    }
    out.tracked.push_back(w);
  } else if (!described) {
    throw EmptyIntersection("an image set has no description; supply a witness point");
  }
  return out;
}

FeasibilityResult run(const OperatorExpr& T, const std::vector<ContractiveProjectionSpec>& specs,
                      const Vector& x0, const SpaceParams& sp, const FeasibilityOptions& opts) {
  Prepared prep = prepare(specs, x0, sp, opts);
  MonitorConfig monitors;
  monitors.tracked_points = std::move(prep.tracked);
  FeasibilityResult res;
  res.trajectory = picard_iterate(T, x0, opts.stop, monitors, sp);
  res.intersection = std::move(prep.intersection);
  for (const auto& s : specs) {
    res.membership_residuals.push_back(fixed_residual(s.projection, res.trajectory.limit(), sp.p));
  }
  res.fejer_violation = fejer_violation(res.trajectory);
  return res;
}

std::vector<OperatorExpr> projections_last_first(const std::vector<ContractiveProjectionSpec>& specs) {
  std::vector<OperatorExpr> ops;
  for (auto it = specs.rbegin(); it != specs.rend(); ++it) ops.push_back(it->projection);
  return ops;
}

}  // namespace

ContractiveProjectionSpec projection_from_isometry(const OperatorExpr& U, const SpaceParams& sp,
                                                   Index dim, const IsometryCheckOptions& opts) {
  if (dim < 1) throw std::invalid_argument("dimension must be positive");
  if (U.dim() != 0 && U.dim() != dim) {
    throw std::invalid_argument("isometry dimension does not match");
  }
  ContractiveProjectionSpec spec{U, contractive_projection(U), complement_of(U, sp),
                                 U.meta().fixed_set};

  Sampler sampler(opts.seed, dim, opts.dist);
  for (std::size_t k = 0; k < opts.samples; ++k) {
    const Vector x = sampler.draw();
    const Vector y = sampler.draw();
    const double scale = std::max({1.0, lp_norm(x, sp.p), lp_norm(y, sp.p)});
    const Vector Ux = U.apply(x);
    if (lp_norm((U.apply(Ux) - x).eval(), sp.p) > opts.involution_tol * scale) {
      throw IsometryRejected("U is not an involution", x);
    }
    const double moved = lp_norm((Ux - U.apply(y)).eval(), sp.p);
    if (std::abs(moved - lp_norm((x - y).eval(), sp.p)) > opts.norm_tol * scale) {
      throw IsometryRejected("U does not preserve distances", x);
    }
    const Vector Px = spec.projection.apply(x);
    if (lp_norm((spec.projection.apply(Px) - Px).eval(), sp.p) > opts.idempotence_tol * scale) {
      throw IsometryRejected("P is not idempotent", x);
    }
  }

  Sampler pairs(opts.seed + 1, dim, opts.dist);
  require_passed(certify_nonexpansive(spec.projection, sp.p, pairs, opts.samples),
                 "P is not nonexpansive");
  require_passed(certify_nonexpansive(spec.complement, sp.p, pairs, opts.samples),
                 "Id - P is not nonexpansive");
  return spec;
}

std::vector<ContractiveProjectionSpec> swap_pair_instance(const SpaceParams& sp, Index dim) {
  if (dim < 3) throw std::invalid_argument("the swap pair needs at least three coordinates");
  return {projection_from_isometry(swap_isometry(0, 1, dim), sp, dim),
          projection_from_isometry(swap_isometry(1, 2, dim), sp, dim)};
}

std::optional<AffineEqual> intersect_images(const std::vector<ContractiveProjectionSpec>& specs) {
  if (specs.empty()) throw std::invalid_argument("no projections given");
  std::optional<AffineEqual> acc;
  for (const auto& s : specs) {
    if (!s.image) throw std::invalid_argument("projection image has no description");
    if (!acc) {
      acc = *s.image;
      continue;
    }
    acc = intersect(*acc, *s.image);
    if (!acc) return std::nullopt;
  }
  return acc;
}

FeasibilityResult alternating_projections(const std::vector<ContractiveProjectionSpec>& specs,
                                          const Vector& x0, const SpaceParams& sp,
                                          const FeasibilityOptions& opts) {
  spec_dim(specs);
  const OperatorExpr T = compose(projections_last_first(specs), sp);
  return run(T, specs, x0, sp, opts);
}

FeasibilityResult averaged_projections(const std::vector<ContractiveProjectionSpec>& specs,
                                       const std::vector<double>& weights, const Vector& x0,
                                       const SpaceParams& sp, const FeasibilityOptions& opts) {
  spec_dim(specs);
  if (weights.size() != specs.size()) throw std::invalid_argument("one weight per projection");
  for (double w : weights) {
    if (!(w > 0.0 && w < 1.0)) throw std::domain_error("averaging weights must lie in (0,1)");
  }
  std::vector<OperatorExpr> ops;
  for (const auto& s : specs) ops.push_back(s.projection);
  const OperatorExpr T = convex_combination(ops, weights, sp);
  return run(T, specs, x0, sp, opts);
}

FixedSetCheck fixed_set_equality_check(const std::vector<ContractiveProjectionSpec>& specs,
                                       const SpaceParams& sp, std::uint64_t seed, std::size_t n,
                                       double tol, double limit_tol) {
  const Index dim = spec_dim(specs);
  if (dim == 0) throw std::invalid_argument("fixed-set check needs a definite dimension");
  const auto inter = intersect_images(specs);
  if (!inter) throw EmptyIntersection("the image sets have empty intersection");

  std::vector<OperatorExpr> ops;
  for (const auto& s : specs) ops.push_back(s.projection);
  const OperatorExpr composed = compose(projections_last_first(specs), sp);
  const OperatorExpr mean = convex_combination(
      ops, std::vector<double>(ops.size(), 1.0 / static_cast<double>(ops.size())), sp);

  FixedSetCheck out;
  out.samples = n;
  const Distribution dist = Distribution::uniform(-10.0, 10.0);
  Sampler inside(seed, dim, dist, ConvexSet::affine_equal(*inter));
  bool fixed_ok = true;
  for (std::size_t k = 0; k < n; ++k) {
    const Vector z = inside.draw();
    const double scale = std::max(1.0, lp_norm(z, sp.p));
    const double rc = fixed_residual(composed, z, sp.p);
    const double ra = fixed_residual(mean, z, sp.p);
    out.composed_residual = std::max(out.composed_residual, rc);
    out.averaged_residual = std::max(out.averaged_residual, ra);
    fixed_ok = fixed_ok && rc <= tol * scale && ra <= tol * scale;
  }

  Sampler starts(seed + 1, dim, dist);
  MonitorConfig quiet;
  quiet.project_onto_fixed_set = false;
  bool limits_ok = true;
  for (std::size_t k = 0; k < n; ++k) {
    const Trajectory tr = picard_iterate(composed, starts.draw(), StopRule{1e-13, 10000}, quiet, sp);
    const Vector& x = tr.limit();
    const double scale = std::max(1.0, lp_norm(x, sp.p));
    for (const auto& s : specs) {
      const double r = fixed_residual(s.projection, x, sp.p);
      out.limit_membership = std::max(out.limit_membership, r);
      limits_ok = limits_ok && tr.converged && r <= limit_tol * scale;
    }
  }
  out.passed = fixed_ok && limits_ok;
  return out;
}

}  // namespace afne
