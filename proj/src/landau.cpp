#include "magspec/landau.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "magspec/numerics/quadrature.hpp"
#include "magspec/numerics/special.hpp"

namespace magspec {

MagneticField::MagneticField(double strength) : b(strength) {
  if (!(strength > 0.0) || !std::isfinite(strength)) throw DomainError("magnetic field must be positive");
}

LevelIndex::LevelIndex(int level) : n(level) {
  if (level < 1) throw DomainError("Landau level index must be at least 1");
}

double landau_level(LevelIndex n, MagneticField b) { return (2.0 * n.n - 1.0) * b.b; }

namespace {

template <class Real>
void merge(std::vector<Monomial<Real>>& terms) {
  std::map<std::pair<int, int>, std::size_t> seen;
  std::vector<Monomial<Real>> out;
  for (auto& t : terms) {
    auto key = std::make_pair(t.p, t.q);
    auto it = seen.find(key);
    if (it == seen.end()) {
      seen.emplace(key, out.size());
      out.push_back(std::move(t));
    } else {
      out[it->second].c += t.c;
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.q != b.q ? a.q < b.q : a.p < b.p;
  });
  terms = std::move(out);
}

// -2i (x + iy) = 2y - 2ix
template <class Real>
Complex<Real> times_minus_2i(const Complex<Real>& c) {
  return {c.im * 2.0, c.re * -2.0};
}

template <class Real>
Complex<Real> phase_factor(double b, Point center, const Vec2<Real>& x, Precision p) {
  using std::cos;
  using std::sin;
  if (center.x == 0.0 && center.y == 0.0) return {make_real<Real>(1.0, p), make_real<Real>(0.0, p)};
  Real theta = (x.y * center.x - x.x * center.y) * (0.5 * b);
  return {cos(theta), sin(theta)};
}

template <class Real>
Real gaussian(double b, const Real& zr, const Real& zi) {
  using std::exp;
  return exp(-(zr * zr + zi * zi) * (0.25 * b));
}

template <class Real>
void power_table(const Real& zr, const Real& zi, int max_p, int max_q, Precision p,
                 std::vector<Complex<Real>>& zp, std::vector<Complex<Real>>& zq) {
  zp.assign(1, {make_real<Real>(1.0, p), make_real<Real>(0.0, p)});
  zq.assign(1, zp[0]);
  Complex<Real> z{zr, zi}, zb{zr, -zi};
  for (int k = 1; k <= max_p; ++k) zp.push_back(zp.back() * z);
  for (int k = 1; k <= max_q; ++k) zq.push_back(zq.back() * zb);
}

}  // namespace

template <class Real>
Complex<Real> LandauFunction<Real>::operator()(const Vec2<Real>& x) const {
  Real zr = x.x - center.x, zi = x.y - center.y;
  int max_p = 0, max_q = 0;
  for (const auto& t : terms) {
    max_p = std::max(max_p, t.p);
    max_q = std::max(max_q, t.q);
  }
  std::vector<Complex<Real>> zp, zq;
  power_table(zr, zi, max_p, max_q, precision, zp, zq);
  Complex<Real> acc = Complex<Real>::zero(precision);
  for (const auto& t : terms) acc += t.c * (zp[t.p] * zq[t.q]);
  acc *= gaussian(b, zr, zi);
  return acc * phase_factor(b, center, x, precision);
}

template <class Real>
LandauFunction<Real> apply_creation(const LandauFunction<Real>& f) {
  LandauFunction<Real> g{f.b, f.center, f.precision, {}};
  for (const auto& t : f.terms) {
    if (t.p > 0) g.terms.push_back({t.p - 1, t.q, times_minus_2i(Complex<Real>(t.c * make_real<Real>(t.p, f.precision)))});
    g.terms.push_back({t.p, t.q + 1, times_minus_2i(Complex<Real>(t.c * make_real<Real>(-0.5 * f.b, f.precision)))});
  }
  merge(g.terms);
  return g;
}

template <class Real>
LandauFunction<Real> apply_annihilation(const LandauFunction<Real>& f) {
  LandauFunction<Real> g{f.b, f.center, f.precision, {}};
  for (const auto& t : f.terms) {
    if (t.q > 0) g.terms.push_back({t.p, t.q - 1, times_minus_2i(Complex<Real>(t.c * make_real<Real>(t.q, f.precision)))});
  }
  merge(g.terms);
  return g;
}

template <class Real>
LandauFunction<Real> basis_function(int n, int m, double b, Precision p, Point center) {
  using std::exp;
  using std::log;
  using std::sqrt;
  LevelIndex level(n);
  b = MagneticField(b).b;
  if (m < 0) throw DomainError("basis_function: angular index must be non-negative");
  const Real two_pi = RealTraits<Real>::pi(p) * 2.0;
  Real log_norm = log(Real(make_real<Real>(b, p) / two_pi)) +
                  log(make_real<Real>(b / 2.0, p)) * static_cast<double>(m) -
                  log_gamma(make_real<Real>(m + 1.0, p));
  Real norm = exp(Real(log_norm * 0.5));
  LandauFunction<Real> f{b, center, p, {}};
  f.terms.push_back({m, 0, Complex<Real>::real(norm)});
  for (int k = 1; k < level.n; ++k) {
    f = apply_creation(f);
    Real scale = 1.0 / sqrt(make_real<Real>(2.0 * b * k, p));
    for (auto& t : f.terms) t.c *= scale;
  }
  return f;
}

template <class Real>
std::vector<Complex<Real>> LandauBasis<Real>::evaluate(const Vec2<Real>& x) const {
  Real zr = x.x - center.x, zi = x.y - center.y;
  int max_p = 0, max_q = 0;
  for (const auto& f : functions)
    for (const auto& t : f.terms) {
      max_p = std::max(max_p, t.p);
      max_q = std::max(max_q, t.q);
    }
  std::vector<Complex<Real>> zp, zq;
  power_table(zr, zi, max_p, max_q, precision, zp, zq);
  Complex<Real> common = phase_factor(b, center, x, precision) * gaussian(b, zr, zi);
  std::vector<Complex<Real>> out;
  out.reserve(functions.size());
  for (const auto& f : functions) {
    Complex<Real> acc = Complex<Real>::zero(precision);
    for (const auto& t : f.terms) acc += t.c * (zp[t.p] * zq[t.q]);
    out.push_back(acc * common);
  }
  return out;
}

template <class Real>
LandauBasis<Real> landau_basis(int n, double b, int count, Precision p, Point center) {
  if (count < 1) throw DomainError("landau_basis: count must be positive");
  LandauBasis<Real> basis{n, b, count, center, p, {}};
  for (int m = 0; m < count; ++m) basis.functions.push_back(basis_function<Real>(n, m, b, p, center));
  return basis;
}

template <class Real>
Complex<Real> projection_kernel(int n, double b, const Vec2<Real>& x, const Vec2<Real>& y) {
  using std::cos;
  using std::exp;
  using std::sin;
  LevelIndex level(n);
  b = MagneticField(b).b;
  const Precision p = precision_of(x.x);
  Real r2 = dist2(x, y);
  Real amp = laguerre(level.n - 1, 0, Real(r2 * (0.5 * b))) * exp(Real(r2 * (-0.25 * b))) *
             (make_real<Real>(b, p) / (RealTraits<Real>::pi(p) * 2.0));
  Real phase = wedge(x, y) * (-0.5 * b);
  return {amp * cos(phase), amp * sin(phase)};
}

template <class Real>
Complex<Real> projection_kernel_basis_sum(int n, double b, const Vec2<Real>& x, const Vec2<Real>& y,
                                          int count, Precision p) {
  auto basis = landau_basis<Real>(n, b, count, p);
  auto fx = basis.evaluate(x);
  auto fy = basis.evaluate(y);
  Complex<Real> acc = Complex<Real>::zero(p);
  for (int m = 0; m < count; ++m) acc += fx[m] * conj(fy[m]);
  return acc;
}

namespace {

// Sixth-order central difference of f along direction e at x, steps h and 2h.
std::pair<std::complex<double>, double> directional(const PlaneFunction& f, Point x, Point e, double h) {
  auto d = [&](double s) {
    auto at = [&](double k) { return f({x.x + k * s * e.x, x.y + k * s * e.y}); };
    return (-at(-3) + 9.0 * at(-2) - 45.0 * at(-1) + 45.0 * at(1) - 9.0 * at(2) + at(3)) / (60.0 * s);
  };
  std::complex<double> fine = d(h), coarse = d(2 * h);
  return {fine, std::abs(fine - coarse) / 63.0};
}

StencilValue covariant(const PlaneFunction& f, double b, Point x, StencilSpec s, bool annihilate) {
  b = MagneticField(b).b;
  auto [dx, ex] = directional(f, x, {1, 0}, s.step);
  auto [dy, ey] = directional(f, x, {0, 1}, s.step);
  const std::complex<double> i(0.0, 1.0);
  std::complex<double> z(x.x, x.y);
  std::complex<double> fx = f(x);
  std::complex<double> v;
  if (annihilate) {
    // -2i (d_zbar + b z / 4)
    v = -2.0 * i * (0.5 * (dx + i * dy) + 0.25 * b * z * fx);
  } else {
    // -2i (d_z - b zbar / 4)
    v = -2.0 * i * (0.5 * (dx - i * dy) - 0.25 * b * std::conj(z) * fx);
  }
  return {v, std::hypot(ex, ey)};
}

PlaneFunction checked(PlaneFunction f, double b, StencilSpec s, bool annihilate) {
  return [f = std::move(f), b, s, annihilate](Point x) {
    StencilValue v = covariant(f, b, x, s, annihilate);
    if (v.error > s.tolerance * std::max(1.0, std::abs(v.value)))
      throw ConvergenceError("stencil derivative accuracy not reached", v.error);
    return v.value;
  };
}

}  // namespace

StencilValue annihilation_at(const PlaneFunction& f, double b, Point x, StencilSpec s) {
  return covariant(f, b, x, s, true);
}

StencilValue creation_at(const PlaneFunction& f, double b, Point x, StencilSpec s) {
  return covariant(f, b, x, s, false);
}

PlaneFunction apply_annihilation(PlaneFunction f, double b, StencilSpec s) {
  return checked(std::move(f), b, s, true);
}

PlaneFunction apply_creation(PlaneFunction f, double b, StencilSpec s) {
  return checked(std::move(f), b, s, false);
}

PlaneRule plane_rule(const PlaneQuadrature& q) {
  if (q.radius <= 0 || q.radial_panels < 1 || q.nodes_per_panel < 1 || q.angular_nodes < 4)
    throw DomainError("plane_rule: invalid quadrature parameters");
  const auto& gl = gauss_legendre<double>(q.nodes_per_panel, {53});
  const double two_pi = 2.0 * RealTraits<double>::pi({53});
  const double dr = q.radius / q.radial_panels;
  const double dt = two_pi / q.angular_nodes;
  PlaneRule rule;
  for (int k = 0; k < q.radial_panels; ++k) {
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      double r = dr * (k + 0.5 * (gl.nodes[i] + 1.0));
      double wr = 0.5 * dr * gl.weights[i] * r * dt;
      for (int j = 0; j < q.angular_nodes; ++j) {
        double t = dt * j;
        rule.nodes.push_back({q.center.x + r * std::cos(t), q.center.y + r * std::sin(t)});
        rule.weights.push_back(wr);
      }
    }
  }
  return rule;
}

std::vector<std::complex<double>> project(int n, double b, const PlaneFunction& f,
                                          const std::vector<Point>& eval, const PlaneQuadrature& q) {
  PlaneRule rule = plane_rule(q);
  std::vector<std::complex<double>> fv;
  fv.reserve(rule.nodes.size());
  double fmax = 0.0;
  for (const auto& y : rule.nodes) {
    fv.push_back(f(y));
    fmax = std::max(fmax, std::abs(fv.back()));
  }
  const double two_pi = 2.0 * RealTraits<double>::pi({53});
  double edge = 0.0;
  for (int j = 0; j < q.angular_nodes; ++j) {
    double t = two_pi * j / q.angular_nodes;
    edge = std::max(edge, std::abs(f({q.center.x + q.radius * std::cos(t), q.center.y + q.radius * std::sin(t)})));
  }
  if (edge > q.tail_tolerance * fmax)
    throw ConvergenceError("project: tail-truncation radius too small", edge / std::max(fmax, 1e-300));
  std::vector<std::complex<double>> out;
  out.reserve(eval.size());
  for (const auto& x : eval) {
    std::complex<double> acc = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k)
      acc += to_std(projection_kernel<double>(n, b, x, rule.nodes[k])) * fv[k] * rule.weights[k];
    out.push_back(acc);
  }
  return out;
}

std::vector<std::complex<double>> project(int n, double b, const QuadGrid<double>& grid,
                                          const std::vector<std::complex<double>>& density,
                                          const std::vector<Point>& eval) {
  if (density.size() != static_cast<std::size_t>(grid.n)) throw DomainError("project: density size mismatch");
  std::vector<std::complex<double>> out;
  out.reserve(eval.size());
  for (const auto& x : eval) {
    std::complex<double> acc = 0.0;
    for (int k = 0; k < grid.n; ++k)
      acc += to_std(projection_kernel<double>(n, b, x, grid.points[k])) * density[k] * grid.weights[k];
    out.push_back(acc);
  }
  return out;
}

template struct LandauFunction<double>;
template struct LandauFunction<BigReal>;
template struct LandauBasis<double>;
template struct LandauBasis<BigReal>;
template LandauFunction<double> basis_function<double>(int, int, double, Precision, Point);
template LandauFunction<BigReal> basis_function<BigReal>(int, int, double, Precision, Point);
template LandauBasis<double> landau_basis<double>(int, double, int, Precision, Point);
template LandauBasis<BigReal> landau_basis<BigReal>(int, double, int, Precision, Point);
template LandauFunction<double> apply_creation<double>(const LandauFunction<double>&);
template LandauFunction<BigReal> apply_creation<BigReal>(const LandauFunction<BigReal>&);
template LandauFunction<double> apply_annihilation<double>(const LandauFunction<double>&);
template LandauFunction<BigReal> apply_annihilation<BigReal>(const LandauFunction<BigReal>&);
template Complex<double> projection_kernel<double>(int, double, const Vec2<double>&, const Vec2<double>&);
template Complex<BigReal> projection_kernel<BigReal>(int, double, const Vec2<BigReal>&, const Vec2<BigReal>&);
template Complex<double> projection_kernel_basis_sum<double>(int, double, const Vec2<double>&,
                                                             const Vec2<double>&, int, Precision);
template Complex<BigReal> projection_kernel_basis_sum<BigReal>(int, double, const Vec2<BigReal>&,
                                                               const Vec2<BigReal>&, int, Precision);

}  // namespace magspec
