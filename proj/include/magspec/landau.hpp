#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "magspec/geometry.hpp"
#include "magspec/numerics/complex.hpp"

namespace magspec {

struct MagneticField {
  double b = 1.0;
  explicit MagneticField(double strength);
};

struct LevelIndex {
  int n = 1;
  explicit LevelIndex(int level);
};

// Lambda_n = (2n - 1) b
double landau_level(LevelIndex n, MagneticField b);

// Monomial c z^p zbar^q with z = x - center in complex notation.
template <class Real>
struct Monomial {
  int p;
  int q;
  Complex<Real> c;
};

// f(x) = e^{i(b/2) center ^ x} P(z, zbar) e^{-b|z|^2/4}, z = x - center.
// The phase is the magnetic translation that keeps f in the same Landau level.
template <class Real>
struct LandauFunction {
  double b = 1.0;
  Point center{0.0, 0.0};
  Precision precision{53};
  std::vector<Monomial<Real>> terms;

  Complex<Real> operator()(const Vec2<Real>& x) const;
};

// psi_{n,m}: level 1 is sqrt((b/2pi) (b/2)^m / m!) z^m e^{-b|z|^2/4}; higher levels
// are normalized raisings Qbar^{n-1} psi_{1,m} / sqrt((2b)^{n-1} (n-1)!).
template <class Real>
LandauFunction<Real> basis_function(int n, int m, double b, Precision p, Point center = {0.0, 0.0});

// Orthonormal functions psi_{n,0..M-1} of one level sharing a center.
template <class Real>
struct LandauBasis {
  int n = 1;
  double b = 1.0;
  int count = 0;
  Point center{0.0, 0.0};
  Precision precision{53};
  std::vector<LandauFunction<Real>> functions;

  // All basis values at x, sharing the power table of z and zbar.
  std::vector<Complex<Real>> evaluate(const Vec2<Real>& x) const;
};

template <class Real>
LandauBasis<Real> landau_basis(int n, double b, int count, Precision p, Point center = {0.0, 0.0});

// Exact action on polynomial-Gaussian functions:
//   Q    = -2i e^{-Psi} d_zbar e^{Psi}:  P -> -2i dP/dzbar
//   Qbar = -2i e^{Psi} d_z e^{-Psi}:     P -> -2i (dP/dz - (b/2) zbar P)
// with Psi = b|z|^2/4. Both commute with the magnetic translation.
template <class Real>
LandauFunction<Real> apply_annihilation(const LandauFunction<Real>& f);
template <class Real>
LandauFunction<Real> apply_creation(const LandauFunction<Real>& f);

// Sampled functions and stencil derivatives.
using PlaneFunction = std::function<std::complex<double>(Point)>;

struct StencilSpec {
  double step = 1e-2;
  // Accepted derivative error relative to max(1, |value|).
  double tolerance = 1e-9;
};

struct StencilValue {
  std::complex<double> value;
  double error;
};

// Q f and Qbar f at x from sixth-order central differences; the error is the
// Richardson estimate from steps h and 2h.
StencilValue annihilation_at(const PlaneFunction& f, double b, Point x, StencilSpec s = {});
StencilValue creation_at(const PlaneFunction& f, double b, Point x, StencilSpec s = {});

// Callable wrappers; throw ConvergenceError when the derivative estimate exceeds tolerance.
PlaneFunction apply_annihilation(PlaneFunction f, double b, StencilSpec s = {});
PlaneFunction apply_creation(PlaneFunction f, double b, StencilSpec s = {});

// P_n(x,y) = (b/2pi) L_{n-1}(b|x-y|^2/2) exp(-b|x-y|^2/4 - i(b/2) x^y)
template <class Real>
Complex<Real> projection_kernel(int n, double b, const Vec2<Real>& x, const Vec2<Real>& y);

// Sum_{m<M} psi_{n,m}(x) conj(psi_{n,m}(y)); reference for projection_kernel.
template <class Real>
Complex<Real> projection_kernel_basis_sum(int n, double b, const Vec2<Real>& x, const Vec2<Real>& y,
                                          int count, Precision p);

// Polar quadrature of the plane for functions with Gaussian tails.
struct PlaneQuadrature {
  Point center{0.0, 0.0};
  double radius = 8.0;      // truncation radius
  int radial_panels = 16;
  int nodes_per_panel = 16;
  int angular_nodes = 64;
  double tail_tolerance = 1e-12;  // max |f| on the truncation circle relative to max |f|
};

// (P_n f)(x) = int P_n(x,y) f(y) dy for a planar function f.
std::vector<std::complex<double>> project(int n, double b, const PlaneFunction& f,
                                          const std::vector<Point>& eval, const PlaneQuadrature& q);

// (P_n h)(x) = sum_k w_k P_n(x, y_k) h_k for a density on a boundary grid.
std::vector<std::complex<double>> project(int n, double b, const QuadGrid<double>& grid,
                                          const std::vector<std::complex<double>>& density,
                                          const std::vector<Point>& eval);

// Nodes and weights of PlaneQuadrature; throws if the tail check fails for f.
struct PlaneRule {
  std::vector<Point> nodes;
  std::vector<double> weights;
};
PlaneRule plane_rule(const PlaneQuadrature& q);

}  // namespace magspec
