#include "magspec/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "magspec/landau.hpp"

namespace magspec {

namespace {

struct Traces {
  int n = 0, m = 0;
  std::vector<BigReal> re, im;  // row-major N x M
};

Traces basis_traces(const ClusterProblem& p, const QuadGrid<double>& grid) {
  const Precision prec = p.precision;
  auto basis = landau_basis<BigReal>(p.n, p.b, p.basis_size, prec, p.curve.center());
  Traces t;
  t.n = grid.n;
  t.m = p.basis_size;
  for (int k = 0; k < grid.n; ++k) {
    auto v = basis.evaluate(Vec2<BigReal>{BigReal(grid.points[k].x, prec), BigReal(grid.points[k].y, prec)});
    for (auto& z : v) {
      t.re.push_back(std::move(z.re));
      t.im.push_back(std::move(z.im));
    }
  }
  return t;
}

struct Shared {
  QuadGrid<double> grid;
  BoundaryMatrix a, b;
  RobinThreshold c0;
  Traces traces;
};

Shared prepare(const ClusterProblem& p) {
  if (p.basis_size < 1) throw DomainError("assemble_Tn: basis size must be positive");
  if (p.grid_size < 16 || p.grid_size % 2 != 0) throw DomainError("assemble_Tn: grid size must be even and >= 16");
  if (p.n < 1) throw DomainError("assemble_Tn: level must be >= 1");
  if (!(p.b > 0.0)) throw DomainError("assemble_Tn: field must be positive");
  Shared s{build_grid<double>(p.curve, p.grid_size), {}, {}, {}, {}};
  auto ab = assemble_AB(s.grid, p.b);
  s.a = std::move(ab.first);
  s.b = std::move(ab.second);
  s.c0 = robin_threshold(s.b, s.grid);
  s.traces = basis_traces(p, s.grid);
  return s;
}

// The Nystrom matrix is a double approximation of T; products with the traces are
// exact at the working precision, so cancellation among basis functions costs nothing.
TnMatrix assemble(const ClusterProblem& p, const Shared& s, const RobinFunction& gamma) {
  TOperator op = build_T(s.a, s.b, s.grid, gamma, s.c0, p.safety);
  const Precision prec = p.precision;
  const int m = p.basis_size, n = s.grid.n;
  const Traces& u = s.traces;
  std::vector<BigReal> t_re, t_im;
  t_re.reserve(static_cast<std::size_t>(n) * n);
  t_im.reserve(static_cast<std::size_t>(n) * n);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      t_re.emplace_back(op.t.entries(k, l).real(), prec);
      t_im.emplace_back(op.t.entries(k, l).imag(), prec);
    }

  // tu = T u, then w-weighted conjugate
  std::vector<BigReal> tu_re(static_cast<std::size_t>(n) * m, BigReal(prec)),
      tu_im(static_cast<std::size_t>(n) * m, BigReal(prec));
  BigReal acc_re(prec), acc_im(prec);
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < n; ++k) {
      acc_re = 0.0;
      acc_im = 0.0;
      for (int l = 0; l < n; ++l) {
        const std::size_t kl = static_cast<std::size_t>(k) * n + l, lj = static_cast<std::size_t>(l) * m + j;
        set_fma(acc_re, t_re[kl], u.re[lj], acc_re);
        // acc - a b = -(a b - acc)
        set_fms(acc_re, t_im[kl], u.im[lj], acc_re);
        acc_re.negate();
        set_fma(acc_im, t_re[kl], u.im[lj], acc_im);
        set_fma(acc_im, t_im[kl], u.re[lj], acc_im);
      }
      const double scale = s.grid.weights[k];
      tu_re[static_cast<std::size_t>(k) * m + j] = acc_re * scale;
      tu_im[static_cast<std::size_t>(k) * m + j] = acc_im * scale;
    }

  // h_ij = Lambda^{-2} sum_k u_ki conj(w_k tu_kj)
  const double lambda = landau_level(LevelIndex(p.n), MagneticField(p.b));
  const double inv2 = 1.0 / (lambda * lambda);
  std::vector<BigComplex> h;
  h.reserve(static_cast<std::size_t>(m) * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      acc_re = 0.0;
      acc_im = 0.0;
      for (int k = 0; k < n; ++k) {
        const std::size_t ki = static_cast<std::size_t>(k) * m + i, kj = static_cast<std::size_t>(k) * m + j;
        // (a + ib)(c - id) = (ac + bd) + i(bc - ad)
        set_fma(acc_re, u.re[ki], tu_re[kj], acc_re);
        set_fma(acc_re, u.im[ki], tu_im[kj], acc_re);
        set_fma(acc_im, u.im[ki], tu_re[kj], acc_im);
        set_fms(acc_im, u.re[ki], tu_im[kj], acc_im);
        acc_im.negate();
      }
      h.emplace_back(acc_re * inv2, acc_im * inv2);
    }

  TnMatrix out(m, prec);
  out.c0 = s.c0.c0;
  out.norm_b = s.c0.norm_b;
  std::vector<double> diag(m);
  for (int i = 0; i < m; ++i) {
    const BigReal& d = h[static_cast<std::size_t>(i) * m + i].re;
    if (!(d > 0.0)) {
      std::ostringstream os;
      os << "assemble_Tn: diagonal entry " << i << " is not positive (" << d.to_string(6) << "), increase N";
      throw ConvergenceError(os.str(), d.to_double());
    }
  }
  double off = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const BigComplex& a = h[static_cast<std::size_t>(i) * m + j];
      const BigComplex& b = h[static_cast<std::size_t>(j) * m + i];
      BigReal denom = sqrt(h[static_cast<std::size_t>(i) * m + i].re * h[static_cast<std::size_t>(j) * m + j].re);
      double gap = (hypot(BigReal(a.re - b.re), BigReal(a.im + b.im)) / denom).to_double();
      out.asymmetry = std::max(out.asymmetry, gap);
      if (i != j) off += (norm(a) / (denom * denom)).to_double();
    }
  out.offdiagonal_ratio = std::sqrt(off / m);
  if (!(out.asymmetry <= p.asymmetry_tolerance)) {
    std::ostringstream os;
    os << "assemble_Tn: scaled asymmetry exceeds " << p.asymmetry_tolerance << " at N = " << p.grid_size
       << ", increase N";
    throw ConvergenceError(os.str(), out.asymmetry);
  }
  for (int i = 0; i < m; ++i) {
    out.matrix.set_diagonal(i, h[static_cast<std::size_t>(i) * m + i].re);
    for (int j = i + 1; j < m; ++j) {
      const BigComplex& a = h[static_cast<std::size_t>(i) * m + j];
      const BigComplex& b = h[static_cast<std::size_t>(j) * m + i];
      out.matrix.set(i, j, BigComplex(BigReal(a.re + b.re) * 0.5, BigReal(a.im - b.im) * 0.5));
    }
  }
  return out;
}

}  // namespace

TnMatrix assemble_Tn(const ClusterProblem& p) {
  Shared s = prepare(p);
  return assemble(p, s, p.gamma);
}

ClusterSpectrum cluster_spectrum(const ClusterProblem& p, const TnMatrix& h) {
  Spectrum<BigReal> sp = hermitian_eigenvalues(h.matrix);
  ClusterSpectrum out;
  out.landau_level = landau_level(LevelIndex(p.n), MagneticField(p.b));
  out.basis_size = p.basis_size;
  out.grid_size = p.grid_size;
  out.bits = p.precision.bits;
  out.asymmetry = h.asymmetry;
  out.offdiagonal_ratio = h.offdiagonal_ratio;
  out.c0 = h.c0;
  out.sweeps = sp.sweeps;
  out.clamp_tolerance = std::pow(10.0, -static_cast<double>(p.precision.bits) / 8.0);
  if (sp.values.empty() || !(sp.values.front() > 0.0))
    throw NumericError("cluster_spectrum: largest eigenvalue is not positive");
  const BigReal floor = sp.values.front() * -out.clamp_tolerance;
  const BigReal inv_lambda(1.0 / out.landau_level, p.precision);
  for (const auto& v : sp.values) {
    if (v > 0.0) {
      out.t.push_back(v);
      out.ell.push_back(1.0 / (inv_lambda + v));
    } else if (v >= floor) {
      ++out.clamped;
    } else {
      throw NumericError("cluster_spectrum: eigenvalue " + v.to_string(6) +
                         " is negative beyond the clamping tolerance, T_n is not positive");
    }
  }
  return out;
}

ClusterSpectrum cluster_spectrum(const ClusterProblem& p) { return cluster_spectrum(p, assemble_Tn(p)); }

GammaSweep gamma_sweep(const ClusterProblem& p, const std::vector<double>& gammas, RateWindow window) {
  if (gammas.empty()) throw DomainError("gamma_sweep: empty gamma list");
  Shared s = prepare(p);
  GammaSweep out;
  out.gammas = gammas;
  out.window = window;
  for (double g : gammas) {
    ClusterProblem q = p;
    q.gamma = RobinFunction::uniform(g);
    out.spectra.push_back(cluster_spectrum(q, assemble(q, s, q.gamma)));
    out.rates.push_back(extrapolate(rho_sequence(out.spectra.back().t), window));
  }
  double lo = out.rates[0].limit, hi = lo, sum = 0.0;
  for (const auto& r : out.rates) {
    lo = std::min(lo, r.limit);
    hi = std::max(hi, r.limit);
    sum += r.limit;
  }
  out.rate_spread = (hi - lo) / (sum / out.rates.size());
  int sign = 0;
  for (std::size_t k = 0; k + 1 < out.spectra.size(); ++k) {
    const auto& a = out.spectra[k].ell;
    const auto& b = out.spectra[k + 1].ell;
    const std::size_t count = std::min(a.size(), b.size());
    const double step = gammas[k + 1] - gammas[k];
    for (std::size_t j = 0; j < count; ++j) {
      int d = (b[j] - a[j]).sign() * (step > 0 ? 1 : step < 0 ? -1 : 0);
      if (d == 0) continue;
      if (sign == 0) sign = d;
      if (d != sign) out.consistent = false;
    }
  }
  out.direction = out.consistent ? sign : 0;
  return out;
}

}  // namespace magspec
