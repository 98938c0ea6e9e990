#pragma once

#include "magspec/numerics/bigreal.hpp"

namespace magspec {

// ln Gamma(x) for x > 0.
template <class Real>
Real log_gamma(const Real& x);

// gamma(a, x) = int_0^x t^(a-1) e^(-t) dt for a > 0, x >= 0.
// Series for x < a + 1, continued fraction for the complement otherwise.
template <class Real>
Real lower_incomplete_gamma(const Real& a, const Real& x);

// Generalized Laguerre polynomial L_k^(alpha)(x) by the three-term recurrence.
template <class Real>
Real laguerre(int k, int alpha, const Real& x) {
  if (k < 0 || alpha < 0) throw DomainError("laguerre: negative degree or order");
  Real prev = x;
  prev = 1.0;
  if (k == 0) return prev;
  Real cur = (1.0 + alpha) - x;
  for (int j = 1; j < k; ++j) {
    Real next = ((2.0 * j + 1.0 + alpha) - x) * cur;
    next -= (static_cast<double>(j) + alpha) * prev;
    next /= static_cast<double>(j + 1);
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

// ln(k!) for k >= 0, exact factorial then rounded log.
BigReal log_factorial(unsigned long k, Precision p);

}  // namespace magspec
