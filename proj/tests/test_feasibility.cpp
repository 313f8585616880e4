#include <doctest.h>

#include <cmath>

#include "afne/feasibility.hpp"
#include "test_support.hpp"

using namespace afne;
using afne::test::max_abs_diff;
using afne::test::random_vector;
using afne::test::Rng;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double t : v) out[i++] = t;
  return out;
}

const SpaceParams l3 = space_params(3.0);
const Vector third = vec({1.0 / 3, 1.0 / 3, 1.0 / 3, 0});

}  // namespace

TEST_CASE("projection from a swap isometry") {
  const auto spec = projection_from_isometry(swap_isometry(0, 1, 4), l3, 4);
  CHECK(spec.projection(vec({1, 3, 5, 7})) == vec({2, 2, 5, 7}));
  CHECK(spec.complement(vec({1, 3, 5, 7})) == vec({-1, 1, 0, 0}));
  REQUIRE(spec.image);
  CHECK(spec.image->groups() == std::vector<std::vector<Index>>{{0, 1}});
  CHECK(*spec.projection.meta().alpha_firm == 0.5);
  CHECK(*spec.complement.meta().alpha_firm == 0.5);
}

TEST_CASE("identity and negation isometries") {
  const auto id = projection_from_isometry(identity(3), l3, 3);
  CHECK(id.projection(vec({1, 2, 3})) == vec({1, 2, 3}));
  CHECK(id.image->degrees_of_freedom() == 3);
  const auto neg = projection_from_isometry(scale(-1.0, 3), l3, 3);
  CHECK(neg.projection(vec({1, 2, 3})) == vec({0, 0, 0}));
  CHECK(neg.image->degrees_of_freedom() == 0);
}

TEST_CASE("non-isometries are rejected with a witness") {
  try {
    projection_from_isometry(scale(0.5, 3), l3, 3);
    FAIL("expected rejection");
  } catch (const IsometryRejected& e) {
    CHECK(e.witness().size() == 3);
  }
  // a rotation is an l_2 isometry but not an l_3 one
  Matrix R(2, 2);
  R << 0.6, 0.8, 0.8, -0.6;
  CHECK_NOTHROW(projection_from_isometry(affine(R, Vector::Zero(2), space_params(2.0)), space_params(2.0), 2));
  CHECK_THROWS_AS(projection_from_isometry(affine(R, Vector::Zero(2), l3), l3, 2), IsometryRejected);
  // a cyclic shift preserves norms but is not an involution
  Matrix C(3, 3);
  C << 0, 1, 0, 0, 0, 1, 1, 0, 0;
  CHECK_THROWS_AS(projection_from_isometry(affine(C, Vector::Zero(3), l3), l3, 3), IsometryRejected);
}

TEST_CASE("alternating projections on the swap pair") {
  const auto specs = swap_pair_instance(l3);
  const auto res = alternating_projections(specs, vec({1, 0, 0, 0}), l3);
  const auto& tr = res.trajectory;
  CHECK(tr.converged);
  CHECK(tr.steps() <= 10000);
  CHECK(max_abs_diff(tr.limit(), third) < 1e-8);
  CHECK(tr.tracked_points.size() == 5);
  CHECK(res.fejer_violation <= 1e-12);
  for (double r : res.membership_residuals) CHECK(r <= 1e-8);
  for (const auto& x : tr.iterates) CHECK(std::abs(x[0] + x[1] + x[2] - 1.0) <= 1e-12);
}

TEST_CASE("averaged projections on the swap pair") {
  const auto specs = swap_pair_instance(l3);
  for (auto w : {std::vector<double>{0.5, 0.5}, std::vector<double>{0.3, 0.7}}) {
    const auto res = averaged_projections(specs, w, vec({1, 0, 0, 0}), l3);
    CHECK(res.trajectory.converged);
    CHECK(max_abs_diff(res.trajectory.limit(), third) < 1e-8);
    CHECK(res.fejer_violation <= 1e-12);
  }
  CHECK_THROWS_AS(averaged_projections(specs, {1.0, 0.0}, vec({1, 0, 0, 0}), l3), std::domain_error);
}

TEST_CASE("starting inside the intersection gives a constant trajectory") {
  const auto specs = swap_pair_instance(l3);
  const Vector z = vec({2, 2, 2, 7});
  const auto alt = alternating_projections(specs, z, l3);
  for (const auto& x : alt.trajectory.iterates) CHECK(x == z);
  const auto avg = averaged_projections(specs, {0.5, 0.5}, z, l3);
  for (const auto& x : avg.trajectory.iterates) CHECK(x == z);
}

TEST_CASE("a single projection settles after its first application") {
  const std::vector<ContractiveProjectionSpec> one{projection_from_isometry(swap_isometry(0, 1, 3), l3, 3)};
  const auto res = alternating_projections(one, vec({4, 0, 1}), l3);
  CHECK(res.trajectory.iterates[1] == vec({2, 2, 1}));
  CHECK(res.trajectory.steps() == 2);
  CHECK(res.trajectory.step_norms[1] == 0.0);
}

TEST_CASE("the conserved sum fixes the limit for random starts") {
  Rng rng(31);
  const auto specs = swap_pair_instance(l3);
  for (int k = 0; k < 25; ++k) {
    const Vector x0 = random_vector(rng, 4);
    const double a = (x0[0] + x0[1] + x0[2]) / 3.0;
    const auto res = alternating_projections(specs, x0, l3);
    CHECK(max_abs_diff(res.trajectory.limit(), vec({a, a, a, x0[3]})) < 1e-8 * std::max(1.0, std::abs(a)));
  }
}

TEST_CASE("contradictory reflections have an empty intersection") {
  Matrix R = Matrix::Identity(3, 3);
  R(0, 0) = -1;
  const auto a = projection_from_isometry(affine(R, vec({2, 0, 0}), l3), l3, 3);
  const auto b = projection_from_isometry(affine(R, vec({0, 0, 0}), l3), l3, 3);
  CHECK_FALSE(intersect_images({a, b}).has_value());
  CHECK_THROWS_AS(alternating_projections({a, b}, vec({3, 1, -1}), l3), EmptyIntersection);
}

TEST_CASE("a witness stands in for missing image descriptors") {
  auto spec = projection_from_isometry(swap_isometry(0, 1, 3), l3, 3);
  spec.image.reset();
  const std::vector<ContractiveProjectionSpec> specs{spec};
  CHECK_THROWS_AS(alternating_projections(specs, vec({1, 0, 0}), l3), EmptyIntersection);
  FeasibilityOptions opts;
  opts.witness = vec({1, 1, 0});
  CHECK(alternating_projections(specs, vec({1, 0, 0}), l3, opts).trajectory.converged);
  opts.witness = vec({1, 2, 0});
  CHECK_THROWS_AS(alternating_projections(specs, vec({1, 0, 0}), l3, opts), EmptyIntersection);
}

TEST_CASE("fixed sets of the composed and averaged maps equal the intersection") {
  const auto specs = swap_pair_instance(l3);
  const auto check = fixed_set_equality_check(specs, l3, 41, 50);
  CHECK(check.passed);
  CHECK(check.composed_residual <= 1e-10 * 10);
  CHECK(check.limit_membership <= 1e-8 * 10);
}

TEST_CASE("P and Id - P are half-firm on samples") {
  for (const auto& spec : swap_pair_instance(l3)) {
    Sampler s(51, 4);
    CHECK(certify_nonexpansive(spec.projection, 3.0, s, 1000).passed);
    Sampler s2(52, 4);
    CHECK(certify_alpha_firm(spec.projection, 0.5, l3, s2, 1000).passed);
    Sampler s3(53, 4);
    CHECK(certify_alpha_firm(spec.complement, 0.5, l3, s3, 1000).passed);
  }
}
