#include <doctest.h>

#include <cmath>

#include "afne/certify.hpp"
#include "afne/dynamics.hpp"
#include "test_support.hpp"

using namespace afne;
using afne::test::random_vector;
using afne::test::Rng;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double t : v) out[i++] = t;
  return out;
}

const SpaceParams l2 = space_params(2.0);
const SpaceParams l3 = space_params(3.0);

}  // namespace

TEST_CASE("firm residual is zero for the identity") {
  Rng rng(1);
  for (int k = 0; k < 100; ++k) {
    const Vector x = random_vector(rng, 3), y = random_vector(rng, 3);
    CHECK(firm_residual(identity(), x, y, 0.4, l3) == 0.0);
  }
}

TEST_CASE("truncation satisfies the firm inequality with equality at its constant") {
  Rng rng(2);
  const auto T = truncation_operator(2, 5, l3);
  for (int k = 0; k < 500; ++k) {
    const Vector x = random_vector(rng, 5), y = random_vector(rng, 5);
    const double scale = std::max(1.0, norm_pow((x - y).eval(), l3));
    CHECK(std::abs(firm_residual(T, x, y, 0.2, l3)) <= 1e-12 * scale);
  }
}

TEST_CASE("certify_alpha_firm on the truncation operator") {
  const auto T = truncation_operator(3, 6, l3);
  Sampler s(42, 6);
  const auto rep = certify_alpha_firm(T, 0.2, l3, s, 5000);
  CHECK(rep.passed);
  CHECK(rep.worst_relative >= -1e-10);
  REQUIRE(rep.estimated_min_alpha);
  CHECK(std::abs(*rep.estimated_min_alpha - 0.2) <= 1e-6);

  Sampler s2(42, 6);
  const auto bad = certify_alpha_firm(T, 0.1, l3, s2, 5000);
  CHECK_FALSE(bad.passed);
  REQUIRE(bad.witness);
  // the witness really violates the inequality
  CHECK(firm_residual(T, bad.witness->first, bad.witness->second, 0.1, l3) < 0.0);
}

TEST_CASE("averaged swap passes at one half; expansive scale fails") {
  Sampler s(3, 4);
  CHECK(certify_alpha_firm(averaged(swap_isometry(0, 1, 4), 0.5), 0.5, l2, s, 2000).passed);
  Sampler s2(3, 4);
  const auto rep = certify_alpha_firm(scale(1.5), 0.9, l2, s2, 2000);
  CHECK_FALSE(rep.passed);
  CHECK(rep.witness.has_value());
  CHECK(rep.alpha_unattainable);
}

TEST_CASE("certification is deterministic in the seed") {
  const auto T = averaged(truncation_operator(1, 3, l3), 0.5);
  Sampler a(9, 3), b(9, 3);
  const auto ra = certify_alpha_firm(T, 0.5, l3, a, 500);
  const auto rb = certify_alpha_firm(T, 0.5, l3, b, 500);
  CHECK(ra.worst_residual == rb.worst_residual);
  CHECK(ra.estimated_min_alpha == rb.estimated_min_alpha);
}

TEST_CASE("certify_nonexpansive") {
  Sampler s(4, 5);
  const auto iso = certify_nonexpansive(swap_isometry(1, 3, 5), 3.0, s, 1000);
  CHECK(iso.passed);
  CHECK(std::abs(iso.worst_relative) <= 1e-12);
  Sampler s2(4, 5);
  CHECK(certify_nonexpansive(scale(0.5), 3.0, s2, 1000).passed);
  Sampler s3(4, 5);
  const auto bad = certify_nonexpansive(scale(2.0), 3.0, s3, 1000);
  CHECK_FALSE(bad.passed);
  CHECK(bad.witness.has_value());
}

TEST_CASE("quasi alpha-firm certification") {
  const auto T = truncation_operator(2, 4, l3);
  Sampler fix = fixed_set_sampler(T, 5);
  Sampler xs(6, 4);
  CHECK(certify_quasi_alpha_firm(T, 0.2, l3, fix, xs, 2000).passed);

  const auto PU = contractive_projection(swap_isometry(0, 1, 4));
  const auto PV = contractive_projection(swap_isometry(1, 2, 4));
  const auto C = compose({PV, PU}, l3);
  Sampler fix2 = fixed_set_sampler(C, 7);
  Sampler xs2(8, 4);
  const auto rep = certify_quasi_alpha_firm(C, *C.meta().alpha_firm, l3, fix2, xs2, 2000);
  CHECK(rep.passed);

  Sampler xs3(8, 4);
  CHECK_THROWS_AS(certify_quasi_alpha_firm(scale(0.5), 0.5, l3, fix2, xs3, 10), std::invalid_argument);
}

TEST_CASE("fixed-set sampler draws exact fixed points") {
  const auto PU = contractive_projection(swap_isometry(0, 1, 4));
  Sampler s = fixed_set_sampler(PU, 11);
  for (int k = 0; k < 50; ++k) {
    const Vector z = s.draw();
    CHECK(z[0] == z[1]);
    CHECK(PU(z) == z);
  }
  CHECK_THROWS_AS(fixed_set_sampler(scale(0.5), 1), std::invalid_argument);
}

TEST_CASE("constrained samplers land in their region") {
  const auto ball = ConvexSet::ball(vec({1, 0, -1}), 2.0, 3.0);
  Sampler in(12, 3, {}, ball);
  Sampler out(12, 3, {}, OutsideBall{vec({1, 0, -1}), 2.0, 3.0});
  const auto half = ConvexSet::halfspace(vec({1, 1, 1}), 0.5);
  Sampler hs(12, 3, {}, half);
  for (int k = 0; k < 200; ++k) {
    CHECK(ball.contains(in.draw()));
    CHECK(lp_norm((out.draw() - vec({1, 0, -1})).eval(), 3.0) > 2.0);
    CHECK(half.contains(hs.draw()));
  }
}

TEST_CASE("bruck phi endpoints") {
  Rng rng(13);
  const auto T = resolvent_of(scale(-1.0), 1.0, l2);
  const Vector x = random_vector(rng, 3), y = random_vector(rng, 3);
  CHECK(bruck_phi(T, x, y, 0.0, 2.0) == doctest::Approx(lp_norm((x - y).eval(), 2.0)));
  CHECK(bruck_phi(T, x, y, 1.0, 2.0) == doctest::Approx(lp_norm((T(x) - T(y)).eval(), 2.0)));
  for (double w : {0.0, 0.3, 0.9}) {
    CHECK(bruck_phi(identity(), x, y, w, 3.0) == doctest::Approx(lp_norm((x - y).eval(), 3.0)));
  }
}

TEST_CASE("bruck firmness") {
  const auto R = resolvent_of(scale(-1.0), 1.0, l2);
  Sampler s(14, 3);
  const auto rep = certify_bruck_firm(R, 2.0, s, default_w_grid(), 500);
  CHECK(rep.passed);
  CHECK(rep.w_grid.size() == default_w_grid().size());
  CHECK(rep.implied_alphas.size() == rep.w_grid.size());

  Sampler s2(14, 3);
  CHECK(certify_bruck_firm(identity(), 2.0, s2, default_w_grid(), 200).passed);

  Sampler s3(14, 3);
  const auto bad = certify_bruck_firm(scale(-1.0), 2.0, s3, default_w_grid(), 200);
  CHECK_FALSE(bad.passed);
  CHECK(bad.witness.has_value());
}

TEST_CASE("property names round-trip") {
  for (auto p : {Property::nonexpansive, Property::alpha_firm, Property::quasi_alpha_firm,
                 Property::bruck_firm}) {
    CHECK(parse_property(to_string(p)) == p);
  }
  CHECK(parse_property("bruck") == Property::bruck_firm);
  CHECK_THROWS_AS(parse_property("firm"), std::invalid_argument);
}
