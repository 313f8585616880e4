#pragma once

#include <cstdint>
#include <random>

#include "afne/space.hpp"

namespace afne::test {

using Rng = std::mt19937_64;

inline Vector random_vector(Rng& rng, Index dim, double lo = -10.0, double hi = 10.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vector v(dim);
  for (Index i = 0; i < dim; ++i) v[i] = u(rng);
  return v;
}

inline double random_unit(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

inline double max_abs_diff(const Vector& a, const Vector& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace afne::test
