#include "afne/projections.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

namespace afne {

namespace {

void check_index(Index i, Index dim) {
  if (i < 0 || i >= dim) {
    throw std::out_of_range("coordinate index " + std::to_string(i) + " outside dimension " +
                            std::to_string(dim));
  }
}

void check_dim(const ConvexSet& C, const Vector& x) {
  if (C.dim() != x.size()) {
    throw std::invalid_argument("dimension mismatch: set has dim " + std::to_string(C.dim()) +
                                ", vector has " + std::to_string(x.size()));
  }
}

struct UnionFind {
  explicit UnionFind(Index n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), Index{0});
  }
  Index find(Index i) {
    while (parent[i] != i) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  }
  void unite(Index a, Index b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<Index> parent;
};

}  // namespace

AffineEqual AffineEqual::whole(Index dim) {
  if (dim < 1) throw std::invalid_argument("dimension must be positive");
  AffineEqual s;
  s.dim_ = dim;
  return s;
}

std::optional<AffineEqual> AffineEqual::build(Index dim,
                                              const std::vector<std::vector<Index>>& groups,
                                              const std::vector<std::pair<Index, double>>& fixed) {
  if (dim < 1) throw std::invalid_argument("dimension must be positive");
  UnionFind uf(dim);
  for (const auto& g : groups) {
    if (g.empty()) throw std::invalid_argument("empty coordinate group");
    for (Index i : g) {
      check_index(i, dim);
      uf.unite(g.front(), i);
    }
  }
  std::map<Index, double> value_of_root;
  for (const auto& [i, v] : fixed) {
    check_index(i, dim);
    if (!std::isfinite(v)) throw std::invalid_argument("fixed coordinate value must be finite");
    const Index root = uf.find(i);
    auto [it, inserted] = value_of_root.emplace(root, v);
    if (!inserted && it->second != v) return std::nullopt;
  }

  std::map<Index, Class> by_root;
  for (Index i = 0; i < dim; ++i) by_root[uf.find(i)].members.push_back(i);
  AffineEqual s;
  s.dim_ = dim;
  for (auto& [root, cls] : by_root) {
    if (auto it = value_of_root.find(root); it != value_of_root.end()) cls.value = it->second;
    if (cls.members.size() >= 2 || cls.value) s.classes_.push_back(std::move(cls));
  }
  return s;
}

AffineEqual AffineEqual::make(Index dim, const std::vector<std::vector<Index>>& groups,
                              const std::vector<std::pair<Index, double>>& fixed) {
  std::vector<bool> seen(static_cast<std::size_t>(std::max<Index>(dim, 0)), false);
  for (const auto& g : groups) {
    for (Index i : g) {
      check_index(i, dim);
      if (seen[i]) throw std::invalid_argument("coordinate groups must be disjoint");
      seen[i] = true;
    }
  }
  auto s = build(dim, groups, fixed);
  if (!s) throw std::invalid_argument("contradictory fixed coordinates");
  return *s;
}

std::vector<std::vector<Index>> AffineEqual::groups() const {
  std::vector<std::vector<Index>> out;
  for (const auto& c : classes_) {
    if (c.members.size() >= 2) out.push_back(c.members);
  }
  return out;
}

std::vector<std::pair<Index, double>> AffineEqual::fixed() const {
  std::vector<std::pair<Index, double>> out;
  for (const auto& c : classes_) {
    if (c.value) out.emplace_back(c.members.front(), *c.value);
  }
  return out;
}

Index AffineEqual::degrees_of_freedom() const {
  Index dof = dim_;
  for (const auto& c : classes_) {
    dof -= static_cast<Index>(c.members.size()) - (c.value ? 0 : 1);
  }
  return dof;
}

std::optional<AffineEqual> intersect(const AffineEqual& a, const AffineEqual& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("cannot intersect sets of different dimension");
  auto groups = a.groups();
  auto more = b.groups();
  groups.insert(groups.end(), more.begin(), more.end());
  auto fixed = a.fixed();
  auto more_fixed = b.fixed();
  fixed.insert(fixed.end(), more_fixed.begin(), more_fixed.end());
  return AffineEqual::build(a.dim(), groups, fixed);
}

ConvexSet ConvexSet::box(Vector lower, Vector upper) {
  check_same_size(lower, upper);
  check_finite(lower);
  check_finite(upper);
  if (lower.size() < 1) throw std::invalid_argument("box must have positive dimension");
  if ((lower.array() > upper.array()).any()) throw std::invalid_argument("box requires lower <= upper");
  return ConvexSet(Box{std::move(lower), std::move(upper)});
}

ConvexSet ConvexSet::ball(Vector center, double radius, double p) {
  check_exponent(p);
  check_finite(center);
  if (center.size() < 1) throw std::invalid_argument("ball must have positive dimension");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw std::invalid_argument("ball radius must be positive");
  return ConvexSet(Ball{std::move(center), radius, p});
}

ConvexSet ConvexSet::halfspace(Vector normal, double offset) {
  check_finite(normal);
  if (normal.size() < 1) throw std::invalid_argument("halfspace must have positive dimension");
  if (normal.isZero(0.0)) throw std::invalid_argument("halfspace normal must be nonzero");
  if (!std::isfinite(offset)) throw std::invalid_argument("halfspace offset must be finite");
  return ConvexSet(Halfspace{std::move(normal), offset});
}

Index ConvexSet::dim() const {
  return std::visit(
      [](const auto& s) -> Index {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Box>) return s.lower.size();
        else if constexpr (std::is_same_v<T, AffineEqual>) return s.dim();
        else if constexpr (std::is_same_v<T, Ball>) return s.center.size();
        else return s.normal.size();
      },
      v_);
}

double ConvexSet::violation(const Vector& x) const {
  check_dim(*this, x);
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Box>) {
          const double below = (s.lower - x).maxCoeff();
          const double above = (x - s.upper).maxCoeff();
          return std::max({0.0, below, above});
        } else if constexpr (std::is_same_v<T, AffineEqual>) {
          double worst = 0.0;
          for (const auto& c : s.classes()) {
            double lo = x[c.members.front()], hi = lo;
            for (Index i : c.members) {
              lo = std::min(lo, x[i]);
              hi = std::max(hi, x[i]);
            }
            worst = std::max(worst, c.value ? std::max(hi - *c.value, *c.value - lo) : hi - lo);
          }
          return worst;
        } else if constexpr (std::is_same_v<T, Ball>) {
          return std::max(0.0, lp_norm((x - s.center).eval(), s.p) - s.radius);
        } else {
          return std::max(0.0, s.normal.dot(x) - s.offset);
        }
      },
      v_);
}

double bisect_increasing(const std::function<double(double)>& f, double lo, double hi, double tol,
                         int budget) {
  if (!(lo <= hi)) throw std::invalid_argument("bisection bracket must satisfy lo <= hi");
  for (int k = 0; k < budget; ++k) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) return mid;
    const double fm = f(mid);
    if (std::abs(fm) <= tol) return mid;
    if (fm < 0.0) lo = mid;
    else hi = mid;
  }
  throw ProjectionError("bisection did not converge within " + std::to_string(budget) + " steps");
}

double power_mean_center(const std::vector<double>& values, double p, double tol, int budget) {
  check_exponent(p);
  if (values.empty()) throw std::invalid_argument("power_mean_center needs at least one value");
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  const double lo = *mn, hi = *mx;
  if (lo == hi) return lo;
  // derivative of a -> sum |v_i - a|^p, divided by p; tolerance scaled to the data spread
  const double scale = static_cast<double>(values.size()) * pow_abs(hi - lo, p - 1.0);
  auto derivative = [&](double a) {
    double g = 0.0;
    for (double v : values) {
      const double d = a - v;
      g += (d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0)) * pow_abs(d, p - 1.0);
    }
    return g;
  };
  return bisect_increasing(derivative, lo, hi, tol * scale, budget);
}

Vector project(const ConvexSet& C, const Vector& x, const SpaceParams& sp, double tol) {
  check_dim(C, x);
  check_finite(x);
  return std::visit(
      [&](const auto& s) -> Vector {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Box>) {
          return x.cwiseMax(s.lower).cwiseMin(s.upper);
        } else if constexpr (std::is_same_v<T, AffineEqual>) {
          Vector y = x;
          std::vector<double> vals;
          for (const auto& c : s.classes()) {
            double a;
            if (c.value) {
              a = *c.value;
            } else {
              vals.clear();
              for (Index i : c.members) vals.push_back(x[i]);
              a = power_mean_center(vals, sp.p, tol);
            }
            for (Index i : c.members) y[i] = a;
          }
          return y;
        } else if constexpr (std::is_same_v<T, Ball>) {
          if (s.p != sp.p) throw std::invalid_argument("ball exponent differs from the ambient l_p");
          const Vector z = x - s.center;
          const double n = lp_norm(z, sp.p);
          if (n <= s.radius) return x;
          // radial scaling attains the lower bound ||z|| - radius
          return s.center + (s.radius / n) * z;
        } else {
          const double excess = s.normal.dot(x) - s.offset;
          if (excess <= 0.0) return x;
          // KKT: d_i = -sgn(a_i)|a_i|^q t with q = 1/(p-1), t fixed by <a, x+d> = offset
          const double q = 1.0 / (sp.p - 1.0);
          double denom = 0.0;
          for (Index i = 0; i < s.normal.size(); ++i) denom += pow_abs(s.normal[i], 1.0 + q);
          const double t = excess / denom;
          Vector y = x;
          for (Index i = 0; i < s.normal.size(); ++i) {
            const double a = s.normal[i];
            if (a != 0.0) y[i] -= (a > 0.0 ? 1.0 : -1.0) * pow_abs(a, q) * t;
          }
          return y;
        }
      },
      C.kind());
}

double projection_inequality_residual(const ConvexSet& C, const Vector& x, const Vector& y,
                                      const SpaceParams& sp) {
  check_same_size(x, y);
  if (!C.contains(y, 1e-10)) throw std::invalid_argument("reference point y is not in the set");
  const Vector px = project(C, x, sp);
  return norm_pow((x - y).eval(), sp) - norm_pow((x - px).eval(), sp) -
         0.5 * sp.c_r * norm_pow((px - y).eval(), sp);
}

double projection_pair_residual(const ConvexSet& C, const Vector& x, const Vector& y,
                                const SpaceParams& sp) {
  check_same_size(x, y);
  const Vector px = project(C, x, sp);
  const Vector py = project(C, y, sp);
  const double rhs = (norm_pow((x - py).eval(), sp) + norm_pow((y - px).eval(), sp) -
                      norm_pow((x - px).eval(), sp) - norm_pow((y - py).eval(), sp)) /
                     sp.c_r;
  return rhs - norm_pow((px - py).eval(), sp);
}

}  // namespace afne
