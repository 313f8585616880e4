#include "afne/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace afne {

namespace {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

// Tracks the pair with the smallest normalized residual, in sample order.
class WorstPair {
 public:
  explicit WorstPair(CertReport& report) : report_(report) {}

  void observe(double residual, double scale, const Vector& x, const Vector& y) {
    const double rel = residual / scale;
    if (!seen_ || rel < report_.worst_relative) {
      seen_ = true;
      report_.worst_relative = rel;
      report_.worst_residual = residual;
      report_.witness = std::make_pair(x, y);
    }
  }

 private:
  CertReport& report_;
  bool seen_ = false;
};

// Smallest alpha with (c_r/2)((1-a)/a) ||Delta||^r <= ||x-y||^r - ||Tx-Ty||^r.
class AlphaEstimate {
 public:
  AlphaEstimate(CertReport& report, double c_r) : report_(report), c_r_(c_r) {}

  void observe(double dist_xy, double dist_T, double delta_pow, double delta_norm, double xy_norm) {
    if (delta_pow == 0.0 || delta_norm <= 1e-14 * std::max(xy_norm, 1.0)) {
      ++report_.degenerate;
      return;
    }
    ++rated_;
    const double beta = 2.0 * (dist_xy - dist_T) / (c_r_ * delta_pow);
    if (!(beta > 0.0)) {
      report_.alpha_unattainable = true;
      return;
    }
    sup_ = std::max(sup_, 1.0 / (1.0 + beta));
  }

  void finish() {
    if (rated_ > 0 && !report_.alpha_unattainable && sup_ > 0.0 && sup_ < 1.0) {
      report_.estimated_min_alpha = sup_;
    }
  }

 private:
  CertReport& report_;
  double c_r_;
  std::size_t rated_ = 0;
  double sup_ = 0.0;
};

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("alpha must lie in (0,1)");
}

void check_count(std::size_t n) {
  if (n < 1) throw std::invalid_argument("at least one sample is required");
}

}  // namespace

std::string to_string(Property p) {
  switch (p) {
    case Property::nonexpansive:
      return "nonexpansive";
    case Property::alpha_firm:
      return "alpha_firm";
    case Property::quasi_alpha_firm:
      return "quasi_alpha_firm";
    case Property::bruck_firm:
      return "bruck";
  }
  return "alpha_firm";
}

Property parse_property(const std::string& name) {
  if (name == "nonexpansive") return Property::nonexpansive;
  if (name == "alpha_firm") return Property::alpha_firm;
  if (name == "quasi_alpha_firm") return Property::quasi_alpha_firm;
  if (name == "bruck" || name == "bruck_firm") return Property::bruck_firm;
  throw std::invalid_argument("unknown property '" + name + "'");
}

Sampler::Sampler(std::uint64_t seed, Index dim, Distribution dist, Constraint constraint)
    : seed_(seed), dim_(dim), dist_(dist), constraint_(std::move(constraint)), rng_(seed) {
  if (dim < 1) throw std::invalid_argument("sampler dimension must be positive");
  if (dist_.kind == Distribution::Kind::uniform_box && !(dist_.low < dist_.high)) {
    throw std::invalid_argument("uniform distribution needs low < high");
  }
  if (dist_.kind == Distribution::Kind::gaussian && !(dist_.stddev > 0.0)) {
    throw std::invalid_argument("gaussian distribution needs a positive standard deviation");
  }
  std::visit(overloaded{
                 [](std::monostate) {},
                 [&](const ConvexSet& C) {
                   if (C.dim() != dim) throw std::invalid_argument("constraint set dimension mismatch");
                 },
                 [&](const OutsideBall& b) {
                   if (b.center.size() != dim) {
                     throw std::invalid_argument("constraint ball dimension mismatch");
                   }
                   if (!(b.radius >= 0.0)) throw std::invalid_argument("ball radius must be nonnegative");
                 },
             },
             constraint_);
}

double Sampler::draw_scalar() {
  if (dist_.kind == Distribution::Kind::gaussian) {
    return std::normal_distribution<double>(0.0, dist_.stddev)(rng_);
  }
  return std::uniform_real_distribution<double>(dist_.low, dist_.high)(rng_);
}

Vector Sampler::draw_free() {
  Vector x(dim_);
  for (Index i = 0; i < dim_; ++i) x[i] = draw_scalar();
  return x;
}

Vector Sampler::draw() {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  return std::visit(
      overloaded{
          [&](std::monostate) -> Vector { return draw_free(); },
          [&](const OutsideBall& b) -> Vector {
            Vector z = draw_free();
            while (z.isZero(0.0)) z = draw_free();
            const double n = lp_norm(z, b.p);
            if (n <= b.radius) z *= b.radius * (1.0 + 1e-6 + unit(rng_)) / n;
            return b.center + z;
          },
          [&](const ConvexSet& C) -> Vector {
            return std::visit(
                overloaded{
                    [&](const Box& box) -> Vector {
                      Vector x(dim_);
                      for (Index i = 0; i < dim_; ++i) {
                        x[i] = box.lower[i] + unit(rng_) * (box.upper[i] - box.lower[i]);
                      }
                      return x;
                    },
                    [&](const AffineEqual& s) -> Vector {
                      Vector x = draw_free();
                      for (const auto& c : s.classes()) {
                        const double v = c.value ? *c.value : draw_scalar();
                        for (Index i : c.members) x[i] = v;
                      }
                      return x;
                    },
                    [&](const Ball& ball) -> Vector {
                      Vector z = draw_free();
                      while (z.isZero(0.0)) z = draw_free();
                      const double radius =
                          ball.radius * std::pow(unit(rng_), 1.0 / static_cast<double>(dim_));
                      return ball.center + (radius / lp_norm(z, ball.p)) * z;
                    },
                    [&](const Halfspace& h) -> Vector {
                      Vector x = draw_free();
                      const double excess = h.normal.dot(x) - h.offset;
                      if (excess > 0.0) {
                        x -= (excess * (1.0 + unit(rng_)) / h.normal.squaredNorm()) * h.normal;
                      }
                      return x;
                    },
                },
                C.kind());
          },
      },
      constraint_);
}

Sampler fixed_set_sampler(const OperatorExpr& T, std::uint64_t seed, Distribution dist) {
  const auto& fs = T.meta().fixed_set;
  if (!fs) throw std::invalid_argument("operator carries no fixed-set metadata");
  return Sampler(seed, fs->dim(), dist, ConvexSet::affine_equal(*fs));
}

double firm_residual(const OperatorExpr& T, const Vector& x, const Vector& y, double alpha,
                     const SpaceParams& sp) {
  check_alpha(alpha);
  check_same_size(x, y);
  const Vector tx = T.apply(x);
  const Vector ty = T.apply(y);
  const double k = 0.5 * sp.c_r * (1.0 - alpha) / alpha;
  return norm_pow((x - y).eval(), sp) - k * norm_pow(((x - tx) - (y - ty)).eval(), sp) -
         norm_pow((tx - ty).eval(), sp);
}

CertReport certify_alpha_firm(const OperatorExpr& T, double alpha, const SpaceParams& sp,
                              Sampler& domain, Sampler& codomain, std::size_t n, double tol) {
  check_alpha(alpha);
  check_count(n);
  CertReport rep;
  rep.property = Property::alpha_firm;
  rep.alpha = alpha;
  rep.tolerance = tol;
  rep.samples = n;
  WorstPair worst(rep);
  AlphaEstimate est(rep, sp.c_r);
  const double k = 0.5 * sp.c_r * (1.0 - alpha) / alpha;
  for (std::size_t s = 0; s < n; ++s) {
    const Vector x = domain.draw();
    const Vector y = codomain.draw();
    const Vector tx = T.apply(x);
    const Vector ty = T.apply(y);
    const Vector delta = (x - tx) - (y - ty);
    const double xy_norm = lp_norm((x - y).eval(), sp.p);
    const double dist_xy = pow_abs(xy_norm, sp.r);
    const double dist_T = norm_pow((tx - ty).eval(), sp);
    const double delta_norm = lp_norm(delta, sp.p);
    const double delta_pow = pow_abs(delta_norm, sp.r);
    worst.observe(dist_xy - k * delta_pow - dist_T, std::max(dist_xy, 1.0), x, y);
    est.observe(dist_xy, dist_T, delta_pow, delta_norm, xy_norm);
  }
  est.finish();
  rep.passed = rep.worst_relative >= -tol;
  return rep;
}

CertReport certify_alpha_firm(const OperatorExpr& T, double alpha, const SpaceParams& sp,
                              Sampler& sampler, std::size_t n, double tol) {
  return certify_alpha_firm(T, alpha, sp, sampler, sampler, n, tol);
}

CertReport certify_quasi_alpha_firm(const OperatorExpr& T, double alpha, const SpaceParams& sp,
                                    Sampler& fix_sampler, Sampler& x_sampler, std::size_t n,
                                    double tol) {
  check_alpha(alpha);
  check_count(n);
  if (!T.meta().fixed_set) {
    throw std::invalid_argument("quasi certification needs fixed-set metadata on the operator");
  }
  CertReport rep;
  rep.property = Property::quasi_alpha_firm;
  rep.alpha = alpha;
  rep.tolerance = tol;
  rep.samples = n;
  WorstPair worst(rep);
  AlphaEstimate est(rep, sp.c_r);
  const double k = 0.5 * sp.c_r * (1.0 - alpha) / alpha;
  for (std::size_t s = 0; s < n; ++s) {
    const Vector y = fix_sampler.draw();
    const Vector x = x_sampler.draw();
    const Vector tx = T.apply(x);
    const double xy_norm = lp_norm((x - y).eval(), sp.p);
    const double dist_xy = pow_abs(xy_norm, sp.r);
    const double dist_T = norm_pow((tx - y).eval(), sp);
    const double delta_norm = lp_norm((x - tx).eval(), sp.p);
    const double delta_pow = pow_abs(delta_norm, sp.r);
    worst.observe(dist_xy - k * delta_pow - dist_T, std::max(dist_xy, 1.0), x, y);
    est.observe(dist_xy, dist_T, delta_pow, delta_norm, xy_norm);
  }
  est.finish();
  rep.passed = rep.worst_relative >= -tol;
  return rep;
}

CertReport certify_nonexpansive(const OperatorExpr& T, double p, Sampler& sampler, std::size_t n,
                                double tol) {
  check_exponent(p);
  check_count(n);
  CertReport rep;
  rep.property = Property::nonexpansive;
  rep.tolerance = tol;
  rep.samples = n;
  WorstPair worst(rep);
  for (std::size_t s = 0; s < n; ++s) {
    const Vector x = sampler.draw();
    const Vector y = sampler.draw();
    const double d = lp_norm((x - y).eval(), p);
    const double dT = lp_norm((T.apply(x) - T.apply(y)).eval(), p);
    worst.observe(d - dT, std::max(d, 1.0), x, y);
  }
  rep.passed = rep.worst_relative >= -tol;
  return rep;
}

double bruck_phi(const OperatorExpr& T, const Vector& x, const Vector& y, double w, double p) {
  if (!(w >= 0.0 && w <= 1.0)) throw std::domain_error("w must lie in [0,1]");
  check_same_size(x, y);
  const Vector d = (1.0 - w) * (x - y) + w * (T.apply(x) - T.apply(y));
  return lp_norm(d, p);
}

std::vector<double> default_w_grid() {
  return {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99};
}

CertReport certify_bruck_firm(const OperatorExpr& T, double p, Sampler& sampler,
                              const std::vector<double>& w_grid, std::size_t n, double tol) {
  check_exponent(p);
  check_count(n);
  if (w_grid.empty()) throw std::invalid_argument("w grid must not be empty");
  for (double w : w_grid) {
    if (!(w >= 0.0 && w < 1.0)) throw std::domain_error("grid values must lie in [0,1)");
  }
  CertReport rep;
  rep.property = Property::bruck_firm;
  rep.tolerance = tol;
  rep.samples = n;
  rep.w_grid = w_grid;
  std::vector<double> worst_per_w(w_grid.size(), std::numeric_limits<double>::infinity());
  WorstPair worst(rep);
  for (std::size_t s = 0; s < n; ++s) {
    const Vector x = sampler.draw();
    const Vector y = sampler.draw();
    const Vector dx = x - y;
    const Vector dT = T.apply(x) - T.apply(y);
    const double phi1 = lp_norm(dT, p);
    const double scale = std::max(lp_norm(dx, p), 1.0);
    double pair_worst = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < w_grid.size(); ++k) {
      const double w = w_grid[k];
      const double residual = lp_norm(((1.0 - w) * dx + w * dT).eval(), p) - phi1;
      worst_per_w[k] = std::min(worst_per_w[k], residual / scale);
      pair_worst = std::min(pair_worst, residual);
    }
    worst.observe(pair_worst, scale, x, y);
  }
  rep.passed = true;
  for (std::size_t k = 0; k < w_grid.size(); ++k) {
    const bool ok = worst_per_w[k] >= -tol;
    rep.w_passed.push_back(ok);
    if (ok) rep.implied_alphas.push_back(1.0 / (1.0 + w_grid[k]));
    rep.passed = rep.passed && ok;
  }
  return rep;
}

}  // namespace afne
