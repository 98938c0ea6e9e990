#include "magspec/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace magspec {

std::string to_string(CapacityMethod m) { return m == CapacityMethod::fekete ? "fekete" : "analytic"; }

CapacityResult capacity_analytic(const CapacityShape& s) {
  CapacityResult r;
  switch (s.kind) {
    case CapacityShape::Kind::disk:
      if (!(s.radius > 0.0)) throw DomainError("capacity_analytic: disk radius must be positive");
      r.value = s.radius;
      break;
    case CapacityShape::Kind::ellipse:
      if (!(s.semi_a > 0.0) || !(s.semi_b > 0.0))
        throw DomainError("capacity_analytic: ellipse semi-axes must be positive");
      r.value = 0.5 * (s.semi_a + s.semi_b);
      break;
    case CapacityShape::Kind::segment:
      if (!(s.length > 0.0)) throw DomainError("capacity_analytic: segment length must be positive");
      r.value = 0.25 * s.length;
      break;
  }
  return r;
}

CapacityResult capacity_analytic(const ShapeDescriptor& d) {
  CapacityShape s;
  switch (d.kind) {
    case ShapeKind::disk:
      s.kind = CapacityShape::Kind::disk;
      s.radius = d.radius;
      break;
    case ShapeKind::ellipse:
      s.kind = CapacityShape::Kind::ellipse;
      s.semi_a = d.semi_a;
      s.semi_b = d.semi_b;
      break;
    default:
      throw DomainError("capacity_analytic: no closed form for shape " + to_string(d.kind));
  }
  return capacity_analytic(s);
}

namespace {

using cplx = std::complex<double>;

struct Path {
  std::function<cplx(double)> z, dz, d2z;
  double lo = 0.0, hi = 0.0;
  bool periodic = true;
};

CapacityResult ascend(const Path& path, int m, const FeketeOptions& opts) {
  if (m < 8) throw DomainError("capacity_fekete: at least 8 points required");
  const double period = path.hi - path.lo;
  std::vector<double> t(m);
  for (int i = 0; i < m; ++i)
    t[i] = path.periodic ? path.lo + period * i / m : path.lo + period * i / (m - 1);
  std::vector<cplx> z(m);
  for (int i = 0; i < m; ++i) z[i] = path.z(t[i]);

  // derivatives of E_i(t) = sum_{j != i} ln |z(t) - z_j|
  // and the sum of |terms| of the first derivative, its rounding scale
  auto local = [&](int i, double ti, double& g, double& h, double& scale) {
    cplx zi = path.z(ti), d1 = path.dz(ti), d2 = path.d2z(ti);
    g = 0.0;
    h = 0.0;
    scale = 0.0;
    for (int j = 0; j < m; ++j) {
      if (j == i) continue;
      cplx q = 1.0 / (zi - z[j]);
      cplx u = d1 * q;
      g += u.real();
      scale += std::fabs(u.real());
      h += (d2 * q - u * u).real();
    }
  };

  auto energy_of = [&](const std::vector<cplx>& pts) {
    double e = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) e += std::log(std::abs(pts[i] - pts[j]));
    return e;
  };

  // Newton on all parameters with the dense Hessian, backtracking on the energy.
  // Returns false when no ascent step is found.
  auto newton = [&]() {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(m);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m, m);
    std::vector<cplx> d1(m), d2(m);
    for (int i = 0; i < m; ++i) {
      d1[i] = path.dz(t[i]);
      d2[i] = path.d2z(t[i]);
    }
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        if (j == i) continue;
        cplx q = 1.0 / (z[i] - z[j]);
        cplx u = d1[i] * q;
        g(i) += u.real();
        h(i, i) += (d2[i] * q - u * u).real();
        h(i, j) = (d1[i] * d1[j] * q * q).real();
      }
    // -h is positive semidefinite near the maximum; rounding-level modes are floored
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(-h);
    if (eig.info() != Eigen::Success) return false;
    Eigen::VectorXd lam = eig.eigenvalues();
    const double floor = 1e-12 * lam.cwiseAbs().maxCoeff();
    for (int k = 0; k < m; ++k) lam(k) = std::max(lam(k), floor);
    Eigen::VectorXd step = eig.eigenvectors() * ((eig.eigenvectors().transpose() * g).array() / lam.array()).matrix();
    double base = energy_of(z);
    for (double scale = 1.0; scale > 1e-6; scale *= 0.5) {
      std::vector<double> nt(t);
      std::vector<cplx> nz(m);
      for (int i = 0; i < m; ++i) {
        if (path.periodic || (i > 0 && i < m - 1)) nt[i] = t[i] + scale * step(i);
        nz[i] = path.z(nt[i]);
      }
      bool ordered = true;
      for (int i = 0; i + 1 < m; ++i) ordered = ordered && nt[i] < nt[i + 1];
      // near the optimum the gain is below the rounding of the energy sum
      if (ordered && energy_of(nz) >= base - 1e-13 * std::fabs(base)) {
        t = std::move(nt);
        z = std::move(nz);
        return true;
      }
    }
    return false;
  };

  CapacityResult r;
  r.method = CapacityMethod::fekete;
  r.point_count = m;
  const double newton_threshold = 1e-4;
  for (int sweep = 1;; ++sweep) {
    double worst = 0.0;
    for (int i = 0; i < m; ++i) {
      // on an open path the end points stay on the bounds, where z' = 0 makes them critical
      if (!path.periodic && (i == 0 || i == m - 1)) continue;
      double g, h, scale;
      local(i, t[i], g, h, scale);
      if (scale > 0.0) worst = std::max(worst, std::fabs(g) / scale);
      // neighbors bound the move so the ordering is kept
      double left, right;
      if (path.periodic) {
        left = t[(i + m - 1) % m], right = t[(i + 1) % m];
        if (i == 0) left -= period;
        if (i == m - 1) right += period;
      } else {
        left = t[i - 1];
        right = t[i + 1];
      }
      double reach = 0.5 * std::min(t[i] - left, right - t[i]);
      double step = h < 0.0 ? -g / h : std::copysign(reach, g);
      step = std::clamp(step, -reach, reach);
      t[i] += step;
      z[i] = path.z(t[i]);
    }
    r.sweeps = sweep;
    r.gradient_norm = worst;
    if (worst < opts.gradient_tolerance) break;
    if (sweep >= opts.max_sweeps)
      throw ConvergenceError("capacity_fekete: ascent stagnated at the sweep cap, gradient norm", worst);
    if (worst < newton_threshold) newton();
  }
  double energy = energy_of(z);
  r.raw_diameter = std::exp(2.0 * energy / (static_cast<double>(m) * (m - 1)));
  r.value = r.raw_diameter * std::pow(static_cast<double>(m), -1.0 / (m - 1));
  return r;
}

CapacityResult fekete(const Path& path, int m, const FeketeOptions& opts) {
  CapacityResult r = ascend(path, m, opts);
  if (opts.estimate_error) r.error_estimate = std::fabs(ascend(path, 2 * m, opts).value - r.value);
  return r;
}

}  // namespace

CapacityResult capacity_fekete(const Curve& c, int points, FeketeOptions opts) {
  Path path;
  path.z = [&c](double t) {
    Point p = c.point(t);
    return cplx(p.x, p.y);
  };
  path.dz = [&c](double t) {
    Point p = c.d1(t);
    return cplx(p.x, p.y);
  };
  path.d2z = [&c](double t) {
    Point p = c.d2(t);
    return cplx(p.x, p.y);
  };
  path.lo = 0.0;
  path.hi = 2.0 * 3.14159265358979323846;
  path.periodic = true;
  return fekete(path, points, opts);
}

CapacityResult capacity_fekete_segment(double length, int points, FeketeOptions opts) {
  if (!(length > 0.0)) throw DomainError("capacity_fekete_segment: length must be positive");
  const double h = 0.5 * length;
  Path path;
  path.z = [h](double t) { return cplx(h * std::cos(t), 0.0); };
  path.dz = [h](double t) { return cplx(-h * std::sin(t), 0.0); };
  path.d2z = [h](double t) { return cplx(-h * std::cos(t), 0.0); };
  path.lo = 0.0;
  path.hi = 3.14159265358979323846;
  path.periodic = false;
  return fekete(path, points, opts);
}

}  // namespace magspec
