#pragma once

#include <cmath>

namespace magspec {

template <class Real>
Vec2<Real> Curve::local(const Real& t) const {
  using std::cos;
  using std::sin;
  const Precision p = precision_of(t);
  Real ct = cos(t), st = sin(t);
  switch (d_.kind) {
    case ShapeKind::disk:
      return {ct * d_.radius, st * d_.radius};
    case ShapeKind::ellipse: {
      Real u = ct * d_.semi_a, v = st * d_.semi_b;
      if (d_.rotation == 0.0) return {u, v};
      Real ang = make_real<Real>(d_.rotation, p);
      Real cr = cos(ang), sr = sin(ang);
      return {cr * u - sr * v, sr * u + cr * v};
    }
    case ShapeKind::star: {
      Real kt = (t - d_.rotation) * static_cast<double>(d_.lobes);
      Real r = (cos(kt) * d_.epsilon + 1.0) * d_.radius;
      return {r * ct, r * st};
    }
  }
  return {ct, st};
}

template <class Real>
Vec2<Real> Curve::d1(const Real& t) const {
  using std::cos;
  using std::sin;
  const Precision p = precision_of(t);
  Real ct = cos(t), st = sin(t);
  switch (d_.kind) {
    case ShapeKind::disk:
      return {-st * d_.radius, ct * d_.radius};
    case ShapeKind::ellipse: {
      Real u = -st * d_.semi_a, v = ct * d_.semi_b;
      if (d_.rotation == 0.0) return {u, v};
      Real ang = make_real<Real>(d_.rotation, p);
      Real cr = cos(ang), sr = sin(ang);
      return {cr * u - sr * v, sr * u + cr * v};
    }
    case ShapeKind::star: {
      const double k = d_.lobes;
      Real kt = (t - d_.rotation) * k;
      Real r = (cos(kt) * d_.epsilon + 1.0) * d_.radius;
      Real dr = sin(kt) * (-d_.radius * d_.epsilon * k);
      return {dr * ct - r * st, dr * st + r * ct};
    }
  }
  return {-st, ct};
}

template <class Real>
Vec2<Real> Curve::d2(const Real& t) const {
  using std::cos;
  using std::sin;
  const Precision p = precision_of(t);
  Real ct = cos(t), st = sin(t);
  switch (d_.kind) {
    case ShapeKind::disk:
      return {-ct * d_.radius, -st * d_.radius};
    case ShapeKind::ellipse: {
      Real u = -ct * d_.semi_a, v = -st * d_.semi_b;
      if (d_.rotation == 0.0) return {u, v};
      Real ang = make_real<Real>(d_.rotation, p);
      Real cr = cos(ang), sr = sin(ang);
      return {cr * u - sr * v, sr * u + cr * v};
    }
    case ShapeKind::star: {
      const double k = d_.lobes;
      Real kt = (t - d_.rotation) * k;
      Real r = (cos(kt) * d_.epsilon + 1.0) * d_.radius;
      Real dr = sin(kt) * (-d_.radius * d_.epsilon * k);
      Real ddr = cos(kt) * (-d_.radius * d_.epsilon * k * k);
      // x'' = r'' e_r + 2 r' e_t - r e_r
      Real er = ddr - r;
      Real et = dr * 2.0;
      return {er * ct - et * st, er * st + et * ct};
    }
  }
  return {-ct, -st};
}

template <class Real>
QuadGrid<Real> build_grid(const Curve& c, int n, Precision p) {
  using std::sqrt;
  if (n < 16 || n % 2 != 0) throw DomainError("build_grid: N must be even and at least 16");
  QuadGrid<Real> g;
  g.n = n;
  g.precision = p;
  const Real two_pi = RealTraits<Real>::pi(p) * 2.0;
  const Real h = two_pi / static_cast<double>(n);
  const Real cx = make_real<Real>(c.center().x, p), cy = make_real<Real>(c.center().y, p);
  for (int i = 0; i < n; ++i) {
    Real t = h * static_cast<double>(i);
    Vec2<Real> l = c.local(t);
    Vec2<Real> d = c.d1(t);
    Real speed = sqrt(Real(d.x * d.x + d.y * d.y));
    g.points.push_back({l.x + cx, l.y + cy});
    g.normals.push_back({-d.y / speed, d.x / speed});
    g.second.push_back(c.d2(t));
    g.weights.push_back(speed * h);
    g.speeds.push_back(std::move(speed));
    g.tangents.push_back(std::move(d));
    g.theta.push_back(std::move(t));
  }
  return g;
}

}  // namespace magspec
