#include <doctest.h>

#include <cmath>

#include "magspec/geometry.hpp"

using namespace magspec;

namespace {

constexpr double kPi = 3.14159265358979323846;

ShapeDescriptor disk(double r, Point c = {0, 0}) { return {ShapeKind::disk, c, r}; }
ShapeDescriptor ellipse(double a, double b) {
  ShapeDescriptor d;
  d.kind = ShapeKind::ellipse;
  d.semi_a = a;
  d.semi_b = b;
  return d;
}
ShapeDescriptor star(double r, double eps, int k) {
  ShapeDescriptor d;
  d.kind = ShapeKind::star;
  d.radius = r;
  d.epsilon = eps;
  d.lobes = k;
  return d;
}

// Perimeter 4 a E(e) from the standard library's complete elliptic integral.
double ellipse_perimeter(double a, double b) {
  double big = std::max(a, b), small = std::min(a, b);
  double e = std::sqrt(1.0 - (small * small) / (big * big));
  return 4.0 * big * std::comp_ellint_2(e);
}

template <class Real>
double total_weight(const QuadGrid<Real>& g) {
  Real s = make_real<Real>(0.0, g.precision);
  for (const auto& w : g.weights) s += w;
  return to_double(s);
}

}  // namespace

TEST_CASE("build_curve examples") {
  Curve c = build_curve(disk(1.0));
  auto g = build_grid<double>(c, 64);
  CHECK(total_weight(g) == doctest::Approx(2 * kPi).epsilon(1e-14));

  Curve e = build_curve(ellipse(1.5, 0.5));
  auto ge = build_grid<double>(e, 128);
  CHECK(std::fabs(total_weight(ge) - ellipse_perimeter(1.5, 0.5)) < 1e-10);
  CHECK(ellipse_perimeter(1.5, 0.5) == doctest::Approx(6.6824).epsilon(1e-4));

  CHECK_THROWS_AS(build_curve(star(1.0, 0.5, 1)), DomainError);
  CHECK_NOTHROW(build_curve(star(1.0, 0.49, 1)));
  CHECK_THROWS_AS(build_curve(disk(-1.0)), DomainError);
  CHECK_THROWS_AS(build_curve(ellipse(1.0, 0.0)), DomainError);
}

TEST_CASE("build_grid at 256 bits sums the circle length to 1e-30") {
  Curve c = build_curve(disk(1.0));
  Precision p{256};
  auto g = build_grid<BigReal>(c, 64, p);
  BigReal s(p);
  for (const auto& w : g.weights) s += w;
  BigReal err = abs(s - BigReal::pi(p) * 2.0);
  CHECK(err < 1e-30);
  CHECK_THROWS_AS(build_grid<double>(c, 15), DomainError);
  CHECK_THROWS_AS(build_grid<double>(c, 14), DomainError);
}

TEST_CASE("grid normals are unit, orthogonal to tangents and point into K") {
  for (auto d : {disk(1.0, {0.3, -0.2}), ellipse(1.5, 0.5), star(1.0, 0.2, 3)}) {
    Curve c = build_curve(d);
    auto g = build_grid<double>(c, 128);
    for (int i = 0; i < g.n; ++i) {
      const auto& nu = g.normals[i];
      CHECK(std::hypot(nu.x, nu.y) == doctest::Approx(1.0).epsilon(1e-15));
      CHECK(std::fabs(dot(nu, g.tangents[i])) / g.speeds[i] < 1e-14);
      Point inside = g.points[i] + 1e-3 * nu;
      Point outside = g.points[i] + (-1e-3) * nu;
      CHECK(c.contains(inside));
      CHECK_FALSE(c.contains(outside));
    }
  }
}

TEST_CASE("second derivatives match finite differences of the tangent") {
  for (auto d : {ellipse(1.5, 0.5), star(1.0, 0.2, 3)}) {
    Curve c = build_curve(d);
    const double h = 1e-5;
    for (double t : {0.1, 1.3, 2.9, 5.0}) {
      Point fd = {(c.d1(t + h).x - c.d1(t - h).x) / (2 * h), (c.d1(t + h).y - c.d1(t - h).y) / (2 * h)};
      CHECK(c.d2(t).x == doctest::Approx(fd.x).epsilon(1e-8));
      CHECK(c.d2(t).y == doctest::Approx(fd.y).epsilon(1e-8));
      Point ft = {(c.local(t + h).x - c.local(t - h).x) / (2 * h), (c.local(t + h).y - c.local(t - h).y) / (2 * h)};
      CHECK(c.d1(t).x == doctest::Approx(ft.x).epsilon(1e-8));
    }
  }
}

TEST_CASE("length converges spectrally under grid doubling") {
  for (auto d : {ellipse(1.5, 0.5), star(1.0, 0.2, 3)}) {
    Curve c = build_curve(d);
    double ref = total_weight(build_grid<double>(c, 512));
    double e32 = std::fabs(total_weight(build_grid<double>(c, 32)) - ref);
    double e64 = std::fabs(total_weight(build_grid<double>(c, 64)) - ref);
    double e128 = std::fabs(total_weight(build_grid<double>(c, 128)) - ref);
    CHECK(e64 < 1e-2 * e32 + 1e-13);
    CHECK(e128 < 1e-2 * e64 + 1e-14);
  }
}

TEST_CASE("inscribed_circumscribed examples") {
  auto [a0, a1] = inscribed_circumscribed(build_curve(disk(1.0)), 0.1);
  CHECK(a0.descriptor().radius == doctest::Approx(0.9));
  CHECK(a1.descriptor().radius == doctest::Approx(1.1));
  auto [b0, b1] = inscribed_circumscribed(build_curve(ellipse(1.5, 0.5)), 0.1);
  CHECK(b0.descriptor().radius == doctest::Approx(0.4));
  CHECK(b1.descriptor().radius == doctest::Approx(1.6));
  auto [c0, c1] = inscribed_circumscribed(build_curve(star(1.0, 0.2, 3)), 0.05);
  CHECK(c0.descriptor().radius == doctest::Approx(0.75));
  CHECK(c1.descriptor().radius == doctest::Approx(1.25));
  CHECK_THROWS_AS(inscribed_circumscribed(build_curve(ellipse(1.5, 0.5)), 0.5), DomainError);
}

TEST_CASE("rotated and translated curves keep their shape") {
  Curve e = build_curve(ellipse(1.5, 0.5));
  Curve r = e.rotated(0.7);
  CHECK(total_weight(build_grid<double>(r, 128)) ==
        doctest::Approx(total_weight(build_grid<double>(e, 128))).epsilon(1e-13));
  CHECK(r.radial(0.7) == doctest::Approx(1.5));
  CHECK(e.scaled(2.0).max_radius() == doctest::Approx(3.0));
}

TEST_CASE("RobinFunction evaluation") {
  RobinFunction g{5.0, {0.5}, {0.0, 0.25}};
  CHECK(g(0.0) == doctest::Approx(5.5));
  CHECK(g(kPi / 4) == doctest::Approx(5.0 + 0.5 * std::cos(kPi / 4) + 0.25));
  CHECK(RobinFunction::uniform(3.0).is_constant());
  CHECK(g.shifted(1.0)(0.0) == doctest::Approx(6.5));
}
