#include <doctest.h>

#include <cmath>
#include <vector>

#include "afne/projections.hpp"
#include "test_support.hpp"

using namespace afne;
using afne::test::max_abs_diff;
using afne::test::random_unit;
using afne::test::random_vector;
using afne::test::Rng;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double t : v) out[i++] = t;
  return out;
}

// Four sets in R^4, one of each kind.
std::vector<ConvexSet> sample_sets(double p) {
  return {
      ConvexSet::box(vec({-1, -2, 0, -0.5}), vec({1, 2, 3, 0.5})),
      ConvexSet::affine_equal(AffineEqual::make(4, {{0, 2}}, {{3, 1.5}})),
      ConvexSet::ball(vec({0.5, -1, 2, 0}), 2.5, p),
      ConvexSet::halfspace(vec({1, -2, 0.5, 3}), 1.0),
  };
}

// A point of C built directly from its description, independent of project().
Vector member(const ConvexSet& C, Rng& rng) {
  const Index d = C.dim();
  return std::visit(
      [&](const auto& s) -> Vector {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Box>) {
          Vector v(d);
          for (Index i = 0; i < d; ++i) v[i] = s.lower[i] + random_unit(rng) * (s.upper[i] - s.lower[i]);
          return v;
        } else if constexpr (std::is_same_v<S, AffineEqual>) {
          Vector v = random_vector(rng, d);
          for (const auto& cls : s.classes()) {
            const double a = cls.value ? *cls.value : random_vector(rng, 1)[0];
            for (Index i : cls.members) v[i] = a;
          }
          return v;
        } else if constexpr (std::is_same_v<S, Ball>) {
          Vector dir = random_vector(rng, d, -1, 1);
          dir /= lp_norm(dir, s.p);
          return s.center + random_unit(rng) * s.radius * dir;
        } else {
          Vector v = random_vector(rng, d);
          const double excess = s.normal.dot(v) - s.offset;
          if (excess > 0) v -= (excess + random_unit(rng)) / s.normal.squaredNorm() * s.normal;
          return v;
        }
      },
      C.kind());
}

double scale_of(const Vector& x, const Vector& y, const SpaceParams& sp) { return residual_scale(x, y, sp); }

}  // namespace

TEST_CASE("power_mean_center against high-precision roots") {
  CHECK(power_mean_center({1, 0, 0}, 3.0) == doctest::Approx(0.41421356237309505).epsilon(1e-11));
  CHECK(power_mean_center({0, 1, 4}, 1.5) == doctest::Approx(1.2733500838578401).epsilon(1e-11));
  CHECK(power_mean_center({-2, 0.5, 3, 7}, 4.0) == doctest::Approx(2.4412310603702255).epsilon(1e-11));
  CHECK(power_mean_center({2, 2, 2}, 3.0) == 2.0);
  CHECK(power_mean_center({1, 3}, 2.0) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("halfspace projection against a plane-chart Newton oracle") {
  const auto y1 = project(ConvexSet::halfspace(vec({1, 2, -1}), 1.0), vec({2, 1, 0}), space_params(3.0));
  CHECK(max_abs_diff(y1, vec({1.3786796564403574, 0.12132034355964257, 0.62132034355964257})) < 1e-13);
  const auto y2 = project(ConvexSet::halfspace(vec({0.5, 1, 2}), -1.0), vec({1, -2, 3}), space_params(1.5));
  CHECK(max_abs_diff(y2, vec({0.84931506849315068, -2.6027397260273973, 0.58904109589041096})) < 1e-13);
}

TEST_CASE("projection of a member is the member") {
  const Vector inside = vec({0, 0, 0});
  CHECK(project(ConvexSet::halfspace(vec({1, 1, 1}), 1.0), inside, space_params(3.0)) == inside);
  CHECK(project(ConvexSet::ball(vec({0, 0, 0}), 1.0, 3.0), inside, space_params(3.0)) == inside);
}

TEST_CASE("box projection clamps") {
  const auto y = project(ConvexSet::box(vec({0, 0}), vec({1, 1})), vec({-3, 0.5}), space_params(4.0));
  CHECK(y == vec({0, 0.5}));
  CHECK_THROWS_AS(ConvexSet::box(vec({1, 0}), vec({0, 1})), std::invalid_argument);
}

TEST_CASE("ball projection is radial") {
  const auto sp = space_params(3.0);
  const Vector c = vec({1, 1});
  const auto y = project(ConvexSet::ball(c, 2.0, 3.0), vec({5, -2}), sp);
  CHECK(lp_norm((y - c).eval(), 3.0) == doctest::Approx(2.0).epsilon(1e-14));
  const Vector dir = vec({4, -3}) / lp_norm(vec({4, -3}), 3.0);
  CHECK(max_abs_diff(y, c + 2.0 * dir) < 1e-14);
  CHECK_THROWS_AS(project(ConvexSet::ball(c, 2.0, 4.0), vec({5, -2}), sp), std::invalid_argument);
}

TEST_CASE("equal-coordinate subspace projection") {
  const auto S = AffineEqual::make(4, {{0, 1, 2}});
  const auto y = project(ConvexSet::affine_equal(S), vec({1, 0, 0, 0}), space_params(3.0));
  const double a = 0.41421356237309505;
  CHECK(max_abs_diff(y, vec({a, a, a, 0})) < 1e-11);
  CHECK(S.degrees_of_freedom() == 2);
}

TEST_CASE("affine-equal construction and intersection") {
  CHECK_THROWS_AS(AffineEqual::make(3, {{0, 1}, {1, 2}}), std::invalid_argument);
  CHECK_THROWS(AffineEqual::make(3, {{0, 1}}, {{0, 1.0}, {1, 2.0}}));
  CHECK_FALSE(AffineEqual::build(3, {{0, 1}}, {{0, 1.0}, {1, 2.0}}).has_value());

  const auto merged = AffineEqual::build(4, {{0, 1}, {1, 2}}, {});
  REQUIRE(merged.has_value());
  CHECK(merged->degrees_of_freedom() == 2);

  const auto u = AffineEqual::make(4, {{0, 1}});
  const auto v = AffineEqual::make(4, {{1, 2}});
  const auto uv = intersect(u, v);
  REQUIRE(uv.has_value());
  CHECK(uv->groups() == std::vector<std::vector<Index>>{{0, 1, 2}});

  const auto pin0 = AffineEqual::make(3, {}, {{0, 1.0}});
  const auto pin1 = AffineEqual::make(3, {}, {{0, 0.0}});
  CHECK_FALSE(intersect(pin0, pin1).has_value());
}

TEST_CASE("pinned classes are kept exactly") {
  const auto S = AffineEqual::make(3, {{0, 1}}, {{1, 2.5}});
  const auto y = project(ConvexSet::affine_equal(S), vec({-1, 7, 4}), space_params(1.5));
  CHECK(y == vec({2.5, 2.5, 4}));
}

TEST_CASE("variational inequalities, idempotence and optimality on random samples") {
  Rng rng(99);
  for (double p : {1.5, 2.0, 3.0, 4.0}) {
    const auto sp = space_params(p);
    for (const auto& C : sample_sets(p)) {
      for (int k = 0; k < 300; ++k) {
        const Vector x = random_vector(rng, 4);
        const Vector z = random_vector(rng, 4);
        const Vector y = member(C, rng);
        REQUIRE(C.contains(y, 1e-10));
        const Vector px = project(C, x, sp);
        CHECK(C.contains(px, 1e-10));
        CHECK(projection_inequality_residual(C, x, y, sp) >= -1e-9 * scale_of(x, y, sp));
        CHECK(projection_pair_residual(C, x, z, sp) >= -1e-9 * scale_of(x, z, sp));
        CHECK(lp_norm((project(C, px, sp) - px).eval(), p) <= 1e-10 * std::max(1.0, lp_norm(px, p)));
        // no member of C is closer to x than the projection
        CHECK(lp_norm((x - px).eval(), p) <= lp_norm((x - y).eval(), p) * (1 + 1e-12) + 1e-12);
      }
    }
  }
}

TEST_CASE("projection inequality rejects reference points outside the set") {
  const auto C = ConvexSet::box(vec({0, 0}), vec({1, 1}));
  CHECK_THROWS_AS(projection_inequality_residual(C, vec({2, 2}), vec({3, 3}), space_params(3.0)),
                  std::invalid_argument);
}

TEST_CASE("bisection reports an exhausted budget") {
  CHECK_THROWS_AS(bisect_increasing([](double t) { return t - 0.3; }, 0.0, 1.0, 0.0, 3), ProjectionError);
  CHECK(bisect_increasing([](double t) { return t - 0.3; }, 0.0, 1.0, 1e-15, 200) ==
        doctest::Approx(0.3).epsilon(1e-14));
}
