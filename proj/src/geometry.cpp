#include "magspec/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace magspec {

std::string to_string(ShapeKind k) {
  switch (k) {
    case ShapeKind::disk:
      return "disk";
    case ShapeKind::ellipse:
      return "ellipse";
    case ShapeKind::star:
      return "star";
  }
  return "unknown";
}

ShapeKind shape_kind_from_string(const std::string& s) {
  if (s == "disk") return ShapeKind::disk;
  if (s == "ellipse") return ShapeKind::ellipse;
  if (s == "star") return ShapeKind::star;
  throw DomainError("unknown shape kind: " + s);
}

Curve build_curve(const ShapeDescriptor& d) {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(d.center.x) || !finite(d.center.y) || !finite(d.rotation))
    throw DomainError("build_curve: non-finite center or rotation");
  switch (d.kind) {
    case ShapeKind::disk:
      if (!(d.radius > 0.0) || !finite(d.radius)) throw DomainError("build_curve: disk radius must be positive");
      break;
    case ShapeKind::ellipse:
      if (!(d.semi_a > 0.0) || !(d.semi_b > 0.0) || !finite(d.semi_a) || !finite(d.semi_b))
        throw DomainError("build_curve: ellipse semi-axes must be positive");
      break;
    case ShapeKind::star:
      if (!(d.radius > 0.0) || !finite(d.radius)) throw DomainError("build_curve: star radius must be positive");
      if (d.lobes < 1) throw DomainError("build_curve: star lobe count must be at least 1");
      if (!(std::fabs(d.epsilon) < 1.0 / (1.0 + d.lobes)))
        throw DomainError("build_curve: star requires |eps| < 1/(1+k)");
      break;
  }
  return Curve(d);
}

double Curve::radial(double phi) const {
  switch (d_.kind) {
    case ShapeKind::disk:
      return d_.radius;
    case ShapeKind::ellipse: {
      double psi = phi - d_.rotation;
      double u = d_.semi_b * std::cos(psi), v = d_.semi_a * std::sin(psi);
      return d_.semi_a * d_.semi_b / std::sqrt(u * u + v * v);
    }
    case ShapeKind::star:
      return d_.radius * (1.0 + d_.epsilon * std::cos(d_.lobes * (phi - d_.rotation)));
  }
  return d_.radius;
}

double Curve::min_radius() const {
  switch (d_.kind) {
    case ShapeKind::disk:
      return d_.radius;
    case ShapeKind::ellipse:
      return std::min(d_.semi_a, d_.semi_b);
    case ShapeKind::star:
      return d_.radius * (1.0 - std::fabs(d_.epsilon));
  }
  return d_.radius;
}

double Curve::max_radius() const {
  switch (d_.kind) {
    case ShapeKind::disk:
      return d_.radius;
    case ShapeKind::ellipse:
      return std::max(d_.semi_a, d_.semi_b);
    case ShapeKind::star:
      return d_.radius * (1.0 + std::fabs(d_.epsilon));
  }
  return d_.radius;
}

bool Curve::contains(Point p) const {
  double dx = p.x - d_.center.x, dy = p.y - d_.center.y;
  return std::hypot(dx, dy) < radial(std::atan2(dy, dx));
}

Curve Curve::scaled(double lambda) const {
  if (!(lambda > 0.0)) throw DomainError("Curve::scaled: factor must be positive");
  ShapeDescriptor d = d_;
  d.center = {lambda * d.center.x, lambda * d.center.y};
  d.radius *= lambda;
  d.semi_a *= lambda;
  d.semi_b *= lambda;
  return Curve(d);
}

Curve Curve::rotated(double angle) const {
  ShapeDescriptor d = d_;
  double c = std::cos(angle), s = std::sin(angle);
  d.center = {c * d_.center.x - s * d_.center.y, s * d_.center.x + c * d_.center.y};
  d.rotation += angle;
  return Curve(d);
}

QuadGrid<double> to_double_grid(const QuadGrid<BigReal>& g) {
  QuadGrid<double> out;
  out.n = g.n;
  out.precision = {53};
  auto pt = [](const Vec2<BigReal>& v) { return to_point(v); };
  for (int i = 0; i < g.n; ++i) {
    out.theta.push_back(g.theta[i].to_double());
    out.points.push_back(pt(g.points[i]));
    out.tangents.push_back(pt(g.tangents[i]));
    out.second.push_back(pt(g.second[i]));
    out.normals.push_back(pt(g.normals[i]));
    out.speeds.push_back(g.speeds[i].to_double());
    out.weights.push_back(g.weights[i].to_double());
  }
  return out;
}

std::pair<Curve, Curve> inscribed_circumscribed(const Curve& c, double margin) {
  if (!(margin > 0.0)) throw DomainError("inscribed_circumscribed: margin must be positive");
  double rmin = c.min_radius(), rmax = c.max_radius();
  if (rmin <= margin) throw DomainError("inscribed_circumscribed: margin exceeds inner radius");
  ShapeDescriptor inner{ShapeKind::disk, c.center(), rmin - margin};
  ShapeDescriptor outer{ShapeKind::disk, c.center(), rmax + margin};
  return {Curve(inner), Curve(outer)};
}

double RobinFunction::operator()(double theta) const {
  double v = constant;
  for (std::size_t m = 0; m < cos_coeffs.size(); ++m) v += cos_coeffs[m] * std::cos((m + 1) * theta);
  for (std::size_t m = 0; m < sin_coeffs.size(); ++m) v += sin_coeffs[m] * std::sin((m + 1) * theta);
  return v;
}

template QuadGrid<double> build_grid<double>(const Curve&, int, Precision);
template QuadGrid<BigReal> build_grid<BigReal>(const Curve&, int, Precision);

}  // namespace magspec
