#include "magspec/toeplitz.hpp"

#include <algorithm>
#include <cmath>

#include "magspec/landau.hpp"
#include "magspec/numerics/hermitian.hpp"
#include "magspec/numerics/quadrature.hpp"
#include "magspec/numerics/special.hpp"

namespace magspec {

std::string to_string(ToeplitzMethod m) { return m == ToeplitzMethod::galerkin ? "galerkin" : "radial_exact"; }

namespace {

void sort_descending(std::vector<BigReal>& v) {
  std::sort(v.begin(), v.end(), [](const BigReal& a, const BigReal& b) { return a > b; });
}

double log2_of(const BigReal& v) { return log(v).to_double() / std::log(2.0); }

// s_m for m < count by composite Gauss-Legendre in x = b r^2 / 2 with `nodes` per panel.
std::vector<BigReal> radial_values(const LandauBasis<BigReal>& basis, double b, double radius, int nodes,
                                   Precision p) {
  const double x_max = 0.5 * b * radius * radius;
  const int panels = std::max(1, static_cast<int>(std::ceil(x_max / 8.0)));
  const auto& gl = gauss_legendre<BigReal>(nodes, p);
  const BigReal scale = BigReal::pi(p) * 2.0 / b;
  std::vector<BigReal> acc(basis.count, BigReal(0.0, p));
  BigReal x_hi(x_max, p);
  for (int k = 0; k < panels; ++k) {
    BigReal lo = x_hi * (static_cast<double>(k) / panels), hi = x_hi * (static_cast<double>(k + 1) / panels);
    BigReal half = (hi - lo) * 0.5, mid = (hi + lo) * 0.5;
    for (int i = 0; i < nodes; ++i) {
      BigReal x = mid + half * gl.nodes[i];
      Vec2<BigReal> pt{sqrt(x * (2.0 / b)), BigReal(0.0, p)};
      auto vals = basis.evaluate(pt);
      BigReal w = gl.weights[i] * half * scale;
      for (int m = 0; m < basis.count; ++m) acc[m] += w * (vals[m].re * vals[m].re + vals[m].im * vals[m].im);
    }
  }
  return acc;
}

void check_precision(const std::vector<BigReal>& s, Precision p, const char* where) {
  unsigned need = required_bits(s);
  if (p.bits < need)
    throw PrecisionError(std::string(where) + ": " + std::to_string(s.size()) + " eigenvalues need at least " +
                             std::to_string(need) + " bits, have " + std::to_string(p.bits),
                         need);
}

}  // namespace

unsigned required_bits(const std::vector<BigReal>& descending) {
  if (descending.empty()) return kMinBits;
  if (!(descending.back() > 0.0)) throw DomainError("required_bits: values must be positive");
  double span = log2_of(descending.front()) - log2_of(descending.back());
  return static_cast<unsigned>(std::ceil(std::max(span, 0.0))) + 64;
}

ToeplitzSpectrum disk_spectrum(int n, double b, double radius, int count, Precision p, DiskChannel channel) {
  LevelIndex level(n);
  b = MagneticField(b).b;
  if (!(radius > 0.0) || !std::isfinite(radius)) throw DomainError("disk_spectrum: radius must be positive");
  if (count < 1) throw DomainError("disk_spectrum: count must be positive");
  if (channel == DiskChannel::automatic) channel = n == 1 ? DiskChannel::closed_form : DiskChannel::radial;
  if (channel == DiskChannel::closed_form && n != 1)
    throw DomainError("disk_spectrum: the closed form covers level 1 only");

  ToeplitzSpectrum out;
  out.n = n;
  out.b = b;
  out.domain.kind = ShapeKind::disk;
  out.domain.radius = radius;
  out.method = ToeplitzMethod::radial_exact;
  out.precision = p;

  std::vector<BigReal> s;
  if (channel == DiskChannel::closed_form) {
    out.truncation = count;
    BigReal x(0.5 * b * radius * radius, p);
    for (int m = 0; m < count; ++m) {
      BigReal a(m + 1.0, p);
      s.push_back(lower_incomplete_gamma(a, x) / exp(log_gamma(a)));
    }
  } else {
    // sectors with m < n - 1 have negative angular momentum and need not be ordered
    const int sectors = count + n + 4;
    out.truncation = sectors;
    auto basis = landau_basis<BigReal>(n, b, sectors, p);
    const int nodes = (sectors + n) / 2 + 24;
    s = radial_values(basis, b, radius, nodes, p);
    auto fine = radial_values(basis, b, radius, nodes + 16, p);
    for (int m = 0; m < sectors; ++m)
      out.error = std::max(out.error, abs(BigReal(fine[m] - s[m])).to_double() / fine[m].to_double());
    s = std::move(fine);
    sort_descending(s);
    s.erase(s.begin() + count, s.end());
  }
  for (const auto& v : s) v.check("disk_spectrum");
  check_precision(s, p, "disk_spectrum");
  out.eigenvalues = std::move(s);
  return out;
}

namespace {

std::vector<BigReal> galerkin_values(int n, double b, const Curve& u, int size, int nodes, Precision p,
                                     double delta) {
  auto basis = landau_basis<BigReal>(n, b, size, p);
  int max_p = 0, max_q = 0;
  for (const auto& f : basis.functions)
    for (const auto& t : f.terms) {
      max_p = std::max(max_p, t.p);
      max_q = std::max(max_q, t.q);
    }
  // conj(z^p zbar^q) z^p' zbar^q' = z^(q+p') zbar^(p+q'): both exponents stay below dim
  const int dim = max_p + max_q + 1;
  const int top = 2 * (dim - 1);

  // moments S_{a,c} = sum_k w_k jac_k Z^a conj(Z)^c I_{a+c}(beta_k), stored for a <= c
  std::vector<BigComplex> moments(static_cast<std::size_t>(dim) * dim, BigComplex::zero(p));
  auto at = [dim](int a, int c) { return static_cast<std::size_t>(a) * dim + c; };
  const BigReal two_pi = BigReal::pi(p) * 2.0;
  std::vector<BigReal> radial(top + 2, BigReal(0.0, p));
  std::vector<BigComplex> zpow(dim, BigComplex::zero(p));
  for (int k = 0; k < nodes; ++k) {
    BigReal t = two_pi * (static_cast<double>(k) / nodes);
    Vec2<BigReal> z = u.local(t), dz = u.d1(t);
    BigReal jac = z.x * dz.y - z.y * dz.x;
    if (!(jac > 0.0)) throw DomainError("galerkin_spectrum: curve is not star-shaped about its center");
    BigReal beta = (z.x * z.x + z.y * z.y) * (0.5 * b);
    // I_d = int_0^1 s^(d+1) e^(-beta s^2) ds = gamma(d/2 + 1, beta) / (2 beta^(d/2+1)),
    // the top two directly, the rest by the stable downward recurrence
    for (int d : {top + 1, top}) {
      BigReal a(0.5 * d + 1.0, p);
      radial[d] = lower_incomplete_gamma(a, beta) / (pow(beta, a) * 2.0);
    }
    BigReal e = exp(-beta);
    for (int d = top - 1; d >= 0; --d) radial[d] = (beta * radial[d + 2] * 2.0 + e) / static_cast<double>(d + 2);
    zpow[0] = {BigReal(1.0, p), BigReal(0.0, p)};
    BigComplex zc{z.x, z.y};
    for (int a = 1; a < dim; ++a) zpow[a] = zpow[a - 1] * zc;
    BigReal w = jac * two_pi / static_cast<double>(nodes);
    for (int a = 0; a < dim; ++a)
      for (int c = a; c < dim; ++c) {
        // Z^a conj(Z)^c = |Z|^(2a) conj(Z)^(c-a)
        BigReal r2a = zpow[a].re * zpow[a].re + zpow[a].im * zpow[a].im;
        BigComplex term = conj(zpow[c - a]);
        term *= BigReal(w * r2a * radial[a + c]);
        moments[at(a, c)] += term;
      }
  }
  auto moment = [&](int a, int c) { return a <= c ? moments[at(a, c)] : conj(moments[at(c, a)]); };

  HermitianMatrix<BigReal> g(size, p);
  for (int i = 0; i < size; ++i)
    for (int j = i; j < size; ++j) {
      BigComplex acc = BigComplex::zero(p);
      for (const auto& ti : basis.functions[i].terms)
        for (const auto& tj : basis.functions[j].terms) acc += conj(ti.c) * tj.c * moment(ti.q + tj.p, ti.p + tj.q);
      if (i == j)
        g.set_diagonal(i, acc.re);
      else
        g.set(i, j, acc);
    }
  auto spec = hermitian_eigenvalues(g);
  for (const auto& v : spec.values)
    if (v < -delta || v > 1.0 + delta)
      throw ConvergenceError("galerkin_spectrum: eigenvalue outside [0, 1], quadrature under-resolved",
                             v.to_double());
  return spec.values;
}

}  // namespace

ToeplitzSpectrum galerkin_spectrum(int n, double b, const Curve& u, int basis_size, Precision p, GalerkinOptions opts) {
  LevelIndex level(n);
  b = MagneticField(b).b;
  if (basis_size < 1) throw DomainError("galerkin_spectrum: basis size must be positive");
  int nodes = opts.angular_nodes > 0 ? opts.angular_nodes : 4 * basis_size + 64;

  ToeplitzSpectrum out;
  out.n = n;
  out.b = b;
  out.domain = u.descriptor();
  out.truncation = basis_size;
  out.method = ToeplitzMethod::galerkin;
  out.precision = p;
  out.eigenvalues = galerkin_values(n, b, u, basis_size, nodes, p, opts.bound_tolerance);

  int keep = opts.stable_count > 0 ? opts.stable_count : std::max(1, basis_size - 20);
  keep = std::min(keep, basis_size);
  if (opts.check_stability) {
    auto wide = galerkin_values(n, b, u, 2 * basis_size, 2 * nodes, p, opts.bound_tolerance);
    for (int j = 0; j < keep; ++j) {
      double rel = abs(BigReal(wide[j] - out.eigenvalues[j])).to_double() / wide[j].to_double();
      out.error = std::max(out.error, rel);
    }
    if (!(out.error <= opts.stability_tolerance))
      throw ConvergenceError("galerkin_spectrum: leading eigenvalues change under basis doubling", out.error);
  }
  out.eigenvalues.erase(out.eigenvalues.begin() + keep, out.eigenvalues.end());
  for (const auto& v : out.eigenvalues)
    if (!(v > 0.0)) throw ConvergenceError("galerkin_spectrum: non-positive leading eigenvalue", v.to_double());
  check_precision(out.eigenvalues, p, "galerkin_spectrum");
  return out;
}

SandwichReport sandwich_check(const std::vector<BigReal>& t, const ToeplitzSpectrum& s0, const ToeplitzSpectrum& s1,
                              SandwichOptions opts) {
  SandwichReport r;
  r.count = static_cast<int>(std::min({t.size(), s0.eigenvalues.size(), s1.eigenvalues.size()}));
  if (r.count < 2) throw DomainError("sandwich_check: need at least two aligned eigenvalues");
  for (int j = 0; j < r.count; ++j) {
    if (!(t[j] > 0.0) || !(s0.eigenvalues[j] > 0.0) || !(s1.eigenvalues[j] > 0.0))
      throw DomainError("sandwich_check: eigenvalues must be positive");
    double lt = log(t[j]).to_double();
    r.lower_gap.push_back(log(s0.eigenvalues[j]).to_double() - lt);
    r.upper_gap.push_back(lt - log(s1.eigenvalues[j]).to_double());
  }
  const int half = (r.count + 1) / 2;
  r.c0 = *std::max_element(r.lower_gap.begin(), r.lower_gap.begin() + half);
  r.c1 = *std::max_element(r.upper_gap.begin(), r.upper_gap.begin() + half);
  r.c0_full = *std::max_element(r.lower_gap.begin(), r.lower_gap.end());
  r.c1_full = *std::max_element(r.upper_gap.begin(), r.upper_gap.end());
  for (int j = half; j < r.count; ++j)
    if (r.lower_gap[j] > r.c0 + opts.slack || r.upper_gap[j] > r.c1 + opts.slack) r.violations.push_back(j + 1);
  return r;
}

}  // namespace magspec
