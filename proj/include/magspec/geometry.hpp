#pragma once

#include <string>
#include <utility>
#include <vector>

#include "magspec/numerics/complex.hpp"

namespace magspec {

enum class ShapeKind { disk, ellipse, star };

std::string to_string(ShapeKind k);
ShapeKind shape_kind_from_string(const std::string& s);

// Parameters of an obstacle boundary. Unused fields are ignored for a given kind.
struct ShapeDescriptor {
  ShapeKind kind = ShapeKind::disk;
  Point center{0.0, 0.0};
  double radius = 1.0;       // disk radius, star base radius
  double semi_a = 1.0;       // ellipse semi-axis along the rotated x direction
  double semi_b = 1.0;       // ellipse semi-axis along the rotated y direction
  double epsilon = 0.0;      // star perturbation amplitude
  int lobes = 1;             // star lobe count
  double rotation = 0.0;     // rotation angle about the center (ellipse, star)
};

// Smooth closed positively oriented curve. Parameter t in [0, 2pi).
//   disk:    c + R (cos t, sin t)
//   ellipse: c + Rot(rotation) (a cos t, b sin t)
//   star:    c + R (1 + eps cos k(t - rotation)) (cos t, sin t)
class Curve {
 public:
  explicit Curve(const ShapeDescriptor& d) : d_(d) {}

  const ShapeDescriptor& descriptor() const { return d_; }
  ShapeKind kind() const { return d_.kind; }
  Point center() const { return d_.center; }

  // Position relative to the center, and its first two parameter derivatives.
  template <class Real>
  Vec2<Real> local(const Real& t) const;
  template <class Real>
  Vec2<Real> d1(const Real& t) const;
  template <class Real>
  Vec2<Real> d2(const Real& t) const;

  Point point(double t) const {
    Point l = local(t);
    return {d_.center.x + l.x, d_.center.y + l.y};
  }

  // Boundary distance from the center in polar direction phi (star-shaped about the center).
  double radial(double phi) const;
  double min_radius() const;
  double max_radius() const;
  bool contains(Point p) const;

  Curve scaled(double lambda) const;
  Curve rotated(double angle) const;

 private:
  ShapeDescriptor d_;
};

// Validates the descriptor: positive sizes, star with |eps| < 1/(1+k).
Curve build_curve(const ShapeDescriptor& d);

// Uniform parameter grid with trapezoid weights. Normals point into K.
template <class Real>
struct QuadGrid {
  int n = 0;
  std::vector<Real> theta;
  std::vector<Vec2<Real>> points;
  std::vector<Vec2<Real>> tangents;   // x'(theta)
  std::vector<Vec2<Real>> second;     // x''(theta)
  std::vector<Vec2<Real>> normals;    // unit, into K
  std::vector<Real> speeds;           // |x'(theta)|
  std::vector<Real> weights;          // 2 pi |x'| / N
  Precision precision{53};
};

template <class Real>
QuadGrid<Real> build_grid(const Curve& c, int n, Precision p = {53});

QuadGrid<double> to_double_grid(const QuadGrid<BigReal>& g);

// Concentric disks K0 inside K and K1 containing K, separated by `margin`.
std::pair<Curve, Curve> inscribed_circumscribed(const Curve& c, double margin);

// Robin coefficient gamma(theta) = g0 + sum_m (a_m cos m theta + b_m sin m theta).
struct RobinFunction {
  double constant = 0.0;
  std::vector<double> cos_coeffs;  // a_1, a_2, ...
  std::vector<double> sin_coeffs;  // b_1, b_2, ...

  static RobinFunction uniform(double g) { return {g, {}, {}}; }
  double operator()(double theta) const;
  bool is_constant() const { return cos_coeffs.empty() && sin_coeffs.empty(); }
  RobinFunction shifted(double delta) const {
    RobinFunction r = *this;
    r.constant += delta;
    return r;
  }
};

}  // namespace magspec

#include "magspec/geometry_impl.hpp"
