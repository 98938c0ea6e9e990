#pragma once

#include <vector>

#include "magspec/numerics/complex.hpp"

namespace magspec {

// Composite Gauss-Legendre in v = 1 - sqrt(t), t = e^{-2bs}, with panels
// [2^{-k-1}, 2^{-k}] refined geometrically toward t = 1 (the s -> 0 end).
struct KernelQuadrature {
  int nodes_per_panel = 0;   // 0 selects from the working precision
  double tolerance = 0.0;    // relative; 0 selects 2^-(bits-10)
  bool estimate_error = true;  // false skips the coarse rule; errors are then NaN
};

template <class Real>
struct KernelEval {
  double b = 1.0;
  int node_count = 0;       // integrand evaluations (fine and coarse rules)
  Complex<Real> value;
  double error = 0.0;       // |fine - coarse| under panel halving, floored at rounding level
};

// Radial profile g(rho) with G0(x,y) = e^{-i(b/2) x^y} g(b|x-y|^2/2):
//   g(rho) = (1/2pi) int_0^1 exp(-(rho/2)(1+u^2)/(1-u^2)) / (1-u^2) du,
// and its derivative g'(rho) under the integral sign.
template <class Real>
struct KernelProfile {
  Real g;
  Real dg;
  double error = 0.0;       // absolute, on g
  double dg_error = 0.0;    // absolute, on g'
  int node_count = 0;
};

template <class Real>
KernelProfile<Real> g0_profile(const Real& rho, KernelQuadrature q = {});

// Separations below this are refused.
inline constexpr double kMinSeparation = 1e-6;

template <class Real>
KernelEval<Real> g0_integral(double b, const Vec2<Real>& x, const Vec2<Real>& y, KernelQuadrature q = {});

// sum_n e^{-tau Lambda_n} P_n(x,y) / Lambda_n. tau is chosen so that the omitted
// short-time heat contribution is below tolerance/2; the Laguerre bound
// |L_k(r)| e^{-r/2} <= 1 bounds the remaining series tail.
template <class Real>
KernelEval<Real> g0_series(double b, const Vec2<Real>& x, const Vec2<Real>& y, int n_max,
                           double tolerance = 1e-10);

// nu . (grad_y + i b A0(y)) G0(x,y): the covariant derivative acting on the
// second argument, where G0 is the complex conjugate of a solution in y.
template <class Real>
KernelEval<Real> g0_normal_derivative(double b, const Vec2<Real>& x, const Vec2<Real>& y,
                                      const Vec2<Real>& normal, KernelQuadrature q = {});

// (grad_x - i b A0(x)) G0(x,y), the covariant gradient in the first argument.
struct CovariantGradient {
  std::complex<double> dx;
  std::complex<double> dy;
};
CovariantGradient g0_gradient_x(double b, Point x, Point y, KernelQuadrature q = {});

// Least-squares fit of Re G0(x, x + r nu) over the radii, against
// ln(1/r), 1, r^2 ln(1/r), r^2. Slope and intercept refer to the first two terms.
struct DiagonalFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // max abs residual of the fit
};

std::vector<double> default_fit_radii();

DiagonalFit diagonal_fit(double b, Point x, Point direction, const std::vector<double>& radii,
                         double max_residual = 1e-12);

// Closed-form reference for the fitted intercept: (3 ln 2 - gamma_E - ln b) / (4 pi).
double diagonal_intercept_reference(double b);

}  // namespace magspec
