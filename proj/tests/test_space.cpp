#include <doctest.h>

#include <cmath>

#include "afne/space.hpp"
#include "test_support.hpp"

using namespace afne;
using afne::test::random_unit;
using afne::test::random_vector;
using afne::test::Rng;

TEST_CASE("space_params constants") {
  const auto s3 = space_params(3.0);
  CHECK(s3.r == 3.0);
  CHECK(s3.K == 1.0);
  CHECK(s3.c_r == doctest::Approx(0.5).epsilon(1e-15));

  const auto s4 = space_params(4.0);
  CHECK(s4.c_r == doctest::Approx(0.25).epsilon(1e-15));

  const auto s2 = space_params(2.0);
  CHECK(s2.r == 2.0);
  CHECK(s2.c_r == 2.0);

  const auto s15 = space_params(1.5);
  CHECK(s15.r == 2.0);
  CHECK(s15.K == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(s15.c_r == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("exponents at or below one are rejected") {
  CHECK_THROWS_AS(space_params(1.0), std::domain_error);
  CHECK_THROWS_AS(space_params(0.5), std::domain_error);
  CHECK_THROWS_AS(space_params(std::nan("")), std::domain_error);
}

TEST_CASE("lp_norm against high-precision values") {
  Vector a(3);
  a << 3, -4, 12;
  CHECK(lp_norm(a, 3.0) == doctest::Approx(12.207054953820638).epsilon(1e-14));
  Vector b(4);
  b << 0.5, -1.5, 2, 0.25;
  CHECK(lp_norm(b, 1.5) == doctest::Approx(2.9799305723317407).epsilon(1e-14));
  CHECK(lp_norm(Vector::Zero(5).eval(), 3.0) == 0.0);
}

TEST_CASE("lp_norm survives very large and very small entries") {
  Vector big(2);
  big << 1e200, 1e200;
  CHECK(lp_norm(big, 3.0) == doctest::Approx(1e200 * std::cbrt(2.0)).epsilon(1e-13));
  Vector tiny(2);
  tiny << 1e-200, 0.0;
  CHECK(lp_norm(tiny, 4.0) == doctest::Approx(1e-200).epsilon(1e-13));
}

TEST_CASE("non-finite inputs are rejected") {
  Vector x(2);
  x << 1.0, std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(check_finite(x), std::invalid_argument);
}

TEST_CASE("convexity residual against high-precision values") {
  Vector e1(2), e2(2);
  e1 << 1, 0;
  e2 << 0, 1;
  CHECK(convexity_residual(e1, e2, 0.5, space_params(3.0)) == doctest::Approx(0.625).epsilon(1e-14));
  CHECK(convexity_residual(e1, e2, 0.5, space_params(1.5)) ==
        doctest::Approx(0.055059212578845126).epsilon(1e-12));

  Vector x(3), y(3);
  x << 1, 2, -1;
  y << 0.5, -1, 3;
  CHECK(convexity_residual(x, y, 0.25, space_params(4.0)) ==
        doctest::Approx(23.088134765625).epsilon(1e-14));
  x << 2, -1, 0.5;
  y << 0, 3, 1;
  CHECK(convexity_residual(x, y, 0.3, space_params(1.5)) ==
        doctest::Approx(2.521697859470126).epsilon(1e-12));
}

TEST_CASE("convexity residual is nonnegative on random triples") {
  Rng rng(20240601);
  for (double p : {1.2, 1.5, 2.0, 2.5, 3.0, 4.0, 6.0}) {
    const auto sp = space_params(p);
    for (int k = 0; k < 2000; ++k) {
      const Index d = 1 + static_cast<Index>(rng() % 9);
      const Vector x = random_vector(rng, d);
      const Vector y = random_vector(rng, d);
      const double w = random_unit(rng);
      CHECK(convexity_residual(x, y, w, sp) >= -1e-9 * residual_scale(x, y, sp));
    }
  }
}

TEST_CASE("parallelogram identity at p = 2") {
  Rng rng(7);
  const auto sp = space_params(2.0);
  for (int k = 0; k < 2000; ++k) {
    const Vector x = random_vector(rng, 5);
    const Vector y = random_vector(rng, 5);
    const double w = random_unit(rng);
    CHECK(std::abs(convexity_residual(x, y, w, sp)) <= 1e-10 * residual_scale(x, y, sp));
  }
}

TEST_CASE("convexity residual vanishes at the endpoints") {
  Rng rng(3);
  const auto sp = space_params(3.0);
  const Vector x = random_vector(rng, 4);
  const Vector y = random_vector(rng, 4);
  CHECK(std::abs(convexity_residual(x, y, 0.0, sp)) <= 1e-12 * residual_scale(x, y, sp));
  CHECK(std::abs(convexity_residual(x, y, 1.0, sp)) <= 1e-12 * residual_scale(x, y, sp));
  CHECK_THROWS_AS(convexity_residual(x, y, 1.5, sp), std::domain_error);
}

TEST_CASE("two-point ball inequality holds") {
  Rng rng(11);
  for (double p : {1.5, 2.0, 3.0, 4.0}) {
    const auto sp = space_params(p);
    for (int k = 0; k < 1000; ++k) {
      const Vector x = random_vector(rng, 6);
      const Vector y = random_vector(rng, 6);
      CHECK(ball_inequality_residual(x, y, sp) >= -1e-9 * residual_scale(x, y, sp));
    }
  }
}

TEST_CASE("mismatched sizes are rejected") {
  CHECK_THROWS_AS(convexity_residual(Vector::Zero(2).eval(), Vector::Zero(3).eval(), 0.5, space_params(3.0)),
                  std::invalid_argument);
}
