#include "magspec/numerics/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace magspec {

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
template <class Real>
void legendre(int n, const Real& x, Real& p, Real& dp) {
  Real p0 = x;
  p0 = 1.0;
  Real p1 = x;
  for (int k = 2; k <= n; ++k) {
    Real p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
    p0 = std::move(p1);
    p1 = std::move(p2);
  }
  p = p1;
  dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
}

template <class Real>
GaussRule<Real> compute_rule(int n, Precision prec) {
  constexpr double kPi = 3.14159265358979323846;
  GaussRule<Real> rule;
  rule.nodes.reserve(n);
  rule.weights.reserve(n);
  for (int i = 0; i < n; ++i) {
    double xd = std::cos(kPi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p = 0, dp = 0;
      legendre(n, xd, p, dp);
      double dx = p / dp;
      xd -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    Real x = make_real<Real>(xd, prec);
    Real p = x, dp = x;
    for (int it = 0; it < 64; ++it) {
      legendre(n, x, p, dp);
      Real dx = p / dp;
      x -= dx;
      if (negligible(dx, x, prec) || dx == 0.0) break;
    }
    legendre(n, x, p, dp);
    rule.weights.push_back(2.0 / ((1.0 - x * x) * dp * dp));
    rule.nodes.push_back(std::move(x));
  }
  return rule;
}

}  // namespace

template <class Real>
const GaussRule<Real>& gauss_legendre(int n, Precision p) {
  if (n < 1) throw DomainError("gauss_legendre: need at least one node");
  static std::mutex mutex;
  static std::map<std::pair<int, unsigned>, std::unique_ptr<GaussRule<Real>>> cache;
  const unsigned bits = RealTraits<Real>::bits(p);
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{n, bits}];
  if (!slot) {
    if (n == 1) {
      slot = std::make_unique<GaussRule<Real>>();
      slot->nodes.push_back(make_real<Real>(0.0, p));
      slot->weights.push_back(make_real<Real>(2.0, p));
    } else {
      slot = std::make_unique<GaussRule<Real>>(compute_rule<Real>(n, p));
    }
  }
  return *slot;
}

template const GaussRule<double>& gauss_legendre<double>(int, Precision);
template const GaussRule<BigReal>& gauss_legendre<BigReal>(int, Precision);

}  // namespace magspec
