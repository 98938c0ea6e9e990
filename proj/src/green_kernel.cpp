#include "magspec/green_kernel.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "magspec/landau.hpp"
#include "magspec/numerics/quadrature.hpp"
#include "magspec/numerics/special.hpp"

namespace magspec {

namespace {

constexpr double kPi = 3.14159265358979323846;

template <class Real>
struct PanelSum {
  Real g;
  Real dg;
  Real mag;  // sum of |w f|, for the rounding floor
};

// int_a^c of the profile integrand in v = 1 - u over one panel.
template <class Real>
void add_panel(const GaussRule<Real>& gl, const Real& rho, const Real& a, const Real& c, PanelSum<Real>& s) {
  using std::exp;
  const Real half = (c - a) * 0.5, mid = (c + a) * 0.5;
  for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
    Real v = gl.nodes[k] * half + mid;
    Real one_minus_u2 = v * (2.0 - v);
    Real one_plus_u2 = (v - 2.0) * v + 2.0;
    Real ratio = one_plus_u2 / one_minus_u2;
    Real f = exp(Real(rho * ratio * -0.5)) / one_minus_u2;
    Real wf = f * gl.weights[k] * half;
    s.mag += wf;
    s.dg -= wf * ratio * 0.5;
    s.g += wf;
  }
}

template <class Real>
PanelSum<Real> integrate(const GaussRule<Real>& gl, const Real& rho, const std::vector<Real>& edges,
                         bool halve) {
  Precision p = precision_of(rho);
  PanelSum<Real> s{make_real<Real>(0.0, p), make_real<Real>(0.0, p), make_real<Real>(0.0, p)};
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const Real& a = edges[i + 1];
    const Real& c = edges[i];
    if (halve) {
      Real m = (a + c) * 0.5;
      add_panel(gl, rho, m, c, s);
      add_panel(gl, rho, a, m, s);
    } else {
      add_panel(gl, rho, a, c, s);
    }
  }
  return s;
}

template <class Real>
Complex<Real> unit_phase(const Real& phi) {
  using std::cos;
  using std::sin;
  return {cos(phi), sin(phi)};
}

template <class Real>
void check_separation(const Vec2<Real>& x, const Vec2<Real>& y, const char* where) {
  double r = std::sqrt(to_double(dist2(x, y)));
  if (!(r >= kMinSeparation * (1.0 - 1e-9)))
    throw DomainError(std::string(where) + ": |x - y| below the minimum separation 1e-6");
}

template <class Real>
double tolerance_of(const KernelQuadrature& q, Precision p) {
  if (q.tolerance > 0.0) return q.tolerance;
  return std::ldexp(1.0, -static_cast<int>(RealTraits<Real>::bits(p)) + 10);
}

}  // namespace

template <class Real>
KernelProfile<Real> g0_profile(const Real& rho, KernelQuadrature q) {
  const Precision p = precision_of(rho);
  const unsigned bits = RealTraits<Real>::bits(p);
  const double rho_d = to_double(rho);
  if (!(rho_d > 0.0) || !std::isfinite(rho_d)) throw DomainError("g0_profile: rho must be positive");
  const int n = q.nodes_per_panel > 0 ? q.nodes_per_panel : std::max(16, static_cast<int>(bits / 5) + 4);
  const auto& gl = gauss_legendre<Real>(n, p);

  // below v_min the integrand is under e^{-L}
  const double L = bits * std::log(2.0) + 20.0;
  const double v_min = rho_d / (2.0 * L);
  const int depth = std::max(1, static_cast<int>(std::ceil(std::log2(1.0 / v_min))));
  // resolve the Gaussian peak at u = 0 for large rho
  const int top = std::max(1, static_cast<int>(std::ceil(std::sqrt(rho_d) / 2.0)));
  // edges in working precision so that halved panels tile the coarse ones exactly
  std::vector<Real> edges;
  for (int j = 0; j < top; ++j) edges.push_back(make_real<Real>(1.0, p) - make_real<Real>(j, p) / (2.0 * top));
  for (int k = 1; k <= depth; ++k) edges.push_back(make_real<Real>(std::ldexp(1.0, -k), p));

  PanelSum<Real> fine = integrate(gl, rho, edges, true);
  if (!q.estimate_error) {
    Real pi2 = RealTraits<Real>::pi(p) * 2.0;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {fine.g / pi2, fine.dg / pi2, nan, nan, 2 * n * static_cast<int>(edges.size() - 1)};
  }
  PanelSum<Real> coarse = integrate(gl, rho, edges, false);
  const double scale = 1.0 / (2.0 * kPi);
  const double floor = 2.0 * std::sqrt(static_cast<double>(n * edges.size())) * RealTraits<Real>::epsilon(p);
  Real pi2 = RealTraits<Real>::pi(p) * 2.0;
  KernelProfile<Real> out{fine.g / pi2, fine.dg / pi2, 0.0, 0.0, 3 * n * static_cast<int>(edges.size() - 1)};
  double mag = to_double(fine.mag) * scale;
  out.error = std::max(std::fabs(to_double(Real(fine.g - coarse.g))) * scale, floor * mag);
  out.dg_error = std::max(std::fabs(to_double(Real(fine.dg - coarse.dg))) * scale, floor * mag * (1.0 + 1.0 / rho_d));
  return out;
}

template <class Real>
KernelEval<Real> g0_integral(double b, const Vec2<Real>& x, const Vec2<Real>& y, KernelQuadrature q) {
  b = MagneticField(b).b;
  check_separation(x, y, "g0_integral");
  const Precision p = precision_of(x.x);
  Real rho = dist2(x, y) * (0.5 * b);
  KernelProfile<Real> prof = g0_profile(rho, q);
  const double tol = tolerance_of<Real>(q, p);
  if (prof.error > tol * std::fabs(to_double(prof.g)))
    throw ConvergenceError("g0_integral: quadrature refinement did not converge", prof.error);
  Real phi = wedge(x, y) * (-0.5 * b);
  Complex<Real> ph = unit_phase(phi);
  return {b, prof.node_count, ph * prof.g, prof.error};
}

template <class Real>
KernelEval<Real> g0_series(double b, const Vec2<Real>& x, const Vec2<Real>& y, int n_max, double tolerance) {
  using std::exp;
  b = MagneticField(b).b;
  check_separation(x, y, "g0_series");
  if (n_max < 1) throw DomainError("g0_series: n_max must be positive");
  if (!(tolerance > 0.0)) throw DomainError("g0_series: tolerance must be positive");
  const Precision p = precision_of(x.x);
  const double r2 = to_double(dist2(x, y));

  // (1/4pi) E1(r^2 / (4 tau)) <= tolerance / 2 bounds the omitted times s < tau
  auto heat_bound = [](double z) { return -std::expint(-z) / (4.0 * kPi); };
  double lo = 1e-3, hi = 1e3;
  for (int it = 0; it < 200; ++it) {
    double mid = std::sqrt(lo * hi);
    (heat_bound(mid) > 0.5 * tolerance ? lo : hi) = mid;
  }
  const double z = hi;
  const double tau = r2 / (4.0 * z);
  const double decay = std::exp(-2.0 * tau * b);
  const double tail = std::exp(-tau * (2.0 * n_max + 1.0) * b) / ((2.0 * n_max + 1.0) * (1.0 - decay) * 2.0 * kPi);
  if (tail > 0.5 * tolerance)
    throw ConvergenceError("g0_series: series tail bound above tolerance; raise n_max", tail);

  Real rho = dist2(x, y) * (0.5 * b);
  Real lag_prev = make_real<Real>(1.0, p), lag = make_real<Real>(1.0, p) - rho;
  Real sum = make_real<Real>(0.0, p);
  Real damp = exp(make_real<Real>(-tau * b, p));
  Real step = exp(make_real<Real>(-2.0 * tau * b, p));
  for (int n = 1; n <= n_max; ++n) {
    // L_{n-1}(rho) in lag_prev
    sum += lag_prev * damp / static_cast<double>(2 * n - 1);
    damp *= step;
    Real next = ((2.0 * n + 1.0) - rho) * lag;
    next -= static_cast<double>(n) * lag_prev;
    next /= static_cast<double>(n + 1);
    lag_prev = std::move(lag);
    lag = std::move(next);
  }
  Real amp = sum * exp(Real(rho * -0.5)) / (RealTraits<Real>::pi(p) * 2.0);
  Real phi = wedge(x, y) * (-0.5 * b);
  Complex<Real> ph = unit_phase(phi);
  double rounding = 64.0 * n_max * RealTraits<Real>::epsilon(p);
  return {b, n_max, ph * amp, 0.5 * tolerance + tail + rounding};
}

template <class Real>
KernelEval<Real> g0_normal_derivative(double b, const Vec2<Real>& x, const Vec2<Real>& y,
                                      const Vec2<Real>& normal, KernelQuadrature q) {
  b = MagneticField(b).b;
  check_separation(x, y, "g0_normal_derivative");
  const Precision p = precision_of(x.x);
  Real rho = dist2(x, y) * (0.5 * b);
  KernelProfile<Real> prof = g0_profile(rho, q);
  Vec2<Real> v = x - y;
  Real radial = -dot(normal, v) * b;              // b nu . (y - x)
  Real gauge = (normal.x * v.y - normal.y * v.x) * (0.5 * b);  // (b/2) nu . J(x - y)
  Real phi = wedge(x, y) * (-0.5 * b);
  Complex<Real> inner{prof.dg * radial, prof.g * gauge};
  const double tol = tolerance_of<Real>(q, p);
  double err = std::fabs(to_double(radial)) * prof.dg_error + std::fabs(to_double(gauge)) * prof.error;
  double mag = std::fabs(to_double(abs(inner)));
  if (err > tol * std::max(mag, 1.0))
    throw ConvergenceError("g0_normal_derivative: quadrature refinement did not converge", err);
  return {b, prof.node_count, unit_phase(phi) * inner, err};
}

CovariantGradient g0_gradient_x(double b, Point x, Point y, KernelQuadrature q) {
  b = MagneticField(b).b;
  check_separation(x, y, "g0_gradient_x");
  double rho = 0.5 * b * dist2(x, y);
  KernelProfile<double> prof = g0_profile(rho, q);
  Point v = x - y;
  std::complex<double> ph = std::polar(1.0, -0.5 * b * wedge(x, y));
  const std::complex<double> i(0.0, 1.0);
  return {ph * (prof.dg * b * v.x - i * (0.5 * b) * (-v.y) * prof.g),
          ph * (prof.dg * b * v.y - i * (0.5 * b) * v.x * prof.g)};
}

std::vector<double> default_fit_radii() {
  std::vector<double> r;
  for (int k = 0; k < 24; ++k) r.push_back(std::pow(10.0, -6.0 + 3.0 * k / 23.0));
  return r;
}

DiagonalFit diagonal_fit(double b, Point x, Point direction, const std::vector<double>& radii, double max_residual) {
  b = MagneticField(b).b;
  if (radii.size() < 6) throw DomainError("diagonal_fit: at least 6 radii required");
  double len = std::hypot(direction.x, direction.y);
  if (!(len > 0.0)) throw DomainError("diagonal_fit: direction must be nonzero");
  Point nu{direction.x / len, direction.y / len};
  const int m = static_cast<int>(radii.size());
  Eigen::MatrixXd a(m, 4);
  Eigen::VectorXd rhs(m);
  for (int k = 0; k < m; ++k) {
    if (!(radii[k] >= 1e-6 * (1.0 - 1e-12) && radii[k] <= 1e-2))
      throw DomainError("diagonal_fit: radii must lie in [1e-6, 1e-2]");
    Point y{x.x + radii[k] * nu.x, x.y + radii[k] * nu.y};
    // the separation actually represented after rounding y
    double r = std::sqrt(dist2(x, y));
    double l = std::log(1.0 / r);
    a(k, 0) = l;
    a(k, 1) = 1.0;
    a(k, 2) = r * r * l;
    a(k, 3) = r * r;
    rhs(k) = g0_integral<double>(b, x, y).value.re;
  }
  Eigen::VectorXd c = a.colPivHouseholderQr().solve(rhs);
  double res = (a * c - rhs).cwiseAbs().maxCoeff();
  if (res > max_residual) throw ConvergenceError("diagonal_fit: fit residual above threshold", res);
  return {c(0), c(1), res};
}

double diagonal_intercept_reference(double b) {
  b = MagneticField(b).b;
  return (3.0 * std::log(2.0) - 0.57721566490153286061 - std::log(b)) / (4.0 * kPi);
}

template KernelProfile<double> g0_profile<double>(const double&, KernelQuadrature);
template KernelProfile<BigReal> g0_profile<BigReal>(const BigReal&, KernelQuadrature);
template KernelEval<double> g0_integral<double>(double, const Vec2<double>&, const Vec2<double>&, KernelQuadrature);
template KernelEval<BigReal> g0_integral<BigReal>(double, const Vec2<BigReal>&, const Vec2<BigReal>&,
                                                  KernelQuadrature);
template KernelEval<double> g0_series<double>(double, const Vec2<double>&, const Vec2<double>&, int, double);
template KernelEval<BigReal> g0_series<BigReal>(double, const Vec2<BigReal>&, const Vec2<BigReal>&, int, double);
template KernelEval<double> g0_normal_derivative<double>(double, const Vec2<double>&, const Vec2<double>&,
                                                         const Vec2<double>&, KernelQuadrature);
template KernelEval<BigReal> g0_normal_derivative<BigReal>(double, const Vec2<BigReal>&, const Vec2<BigReal>&,
                                                           const Vec2<BigReal>&, KernelQuadrature);

}  // namespace magspec
