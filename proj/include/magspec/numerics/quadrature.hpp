#pragma once

#include <vector>

#include "magspec/numerics/bigreal.hpp"

namespace magspec {

// Gauss-Legendre rule on [-1, 1].
template <class Real>
struct GaussRule {
  std::vector<Real> nodes;
  std::vector<Real> weights;
};

// Cached per (n, precision); the returned reference stays valid for the program lifetime.
template <class Real>
const GaussRule<Real>& gauss_legendre(int n, Precision p);

}  // namespace magspec
