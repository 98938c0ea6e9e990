#include <doctest.h>

#include <cmath>
#include <random>

#include "magspec/boundary_ops.hpp"
#include "magspec/numerics/quadrature.hpp"

using namespace magspec;

namespace {

constexpr double kPi = 3.14159265358979323846;

Curve disk() { return build_curve({ShapeKind::disk, {0.0, 0.0}, 1.0}); }
Curve ellipse() {
  ShapeDescriptor d;
  d.kind = ShapeKind::ellipse;
  d.semi_a = 1.5;
  d.semi_b = 0.5;
  return build_curve(d);
}

struct Setup {
  QuadGrid<double> grid;
  BoundaryMatrix a, b;
};

Setup setup(const Curve& c, int n, double b = 1.0) {
  auto grid = build_grid<double>(c, n);
  auto [a, bm] = assemble_AB(grid, b);
  return {grid, a, bm};
}

// Row i of an operator applied to h, by composite Gauss-Legendre in the curve
// parameter graded toward the singular point on both sides, down to s = pi 2^-depth.
// The innermost piece on each side is taken as limit * h(t0) * width; for a bounded
// kernel the odd first-order terms cancel between the sides. The kernel gets the
// radial profile directly since separations go far below the public cutoff.
template <class Kernel>
std::complex<double> graded_row(const Curve& c, double t0, Kernel kernel, const BoundaryDensity& h, int depth = 40,
                                std::complex<double> limit = 0.0) {
  const auto& gl = gauss_legendre<double>(20, {53});
  const double inner_width = kPi * std::ldexp(1.0, -depth);
  std::vector<double> edges{inner_width};
  for (int k = depth - 1; k >= 1; --k) edges.push_back(kPi * std::ldexp(1.0, -k));
  edges.push_back(kPi);
  std::complex<double> acc = 2.0 * inner_width * limit * h(t0);
  for (int side : {1, -1}) {
    for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
      double a = edges[e], bnd = edges[e + 1];
      for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
        double s = 0.5 * (bnd - a) * gl.nodes[i] + 0.5 * (bnd + a);
        double t = t0 + side * s;
        Point d1 = c.d1(t);
        double speed = std::hypot(d1.x, d1.y);
        Point nu{-d1.y / speed, d1.x / speed};
        acc += 0.5 * (bnd - a) * gl.weights[i] * kernel(c.point(t), nu) * h(t) * speed;
      }
    }
  }
  return acc;
}

std::complex<double> kernel_a(double b, Point x, Point y) {
  auto p = g0_profile(0.5 * b * dist2(x, y));
  return std::polar(p.g, -0.5 * b * wedge(x, y));
}

// nu . (grad_y + i b A0(y)) G0(x, y)
std::complex<double> kernel_b(double b, Point x, Point y, Point nu) {
  auto p = g0_profile(0.5 * b * dist2(x, y));
  Point v = x - y;
  std::complex<double> inner(-p.dg * b * dot(nu, v), 0.5 * b * p.g * (nu.x * v.y - nu.y * v.x));
  return std::polar(1.0, -0.5 * b * wedge(x, y)) * inner;
}

}  // namespace

TEST_CASE("A is Hermitian, positive definite, and of order -1") {
  for (const Curve& c : {disk(), ellipse()}) {
    Setup s = setup(c, 128);
    CHECK(asymmetry(s.a, s.grid) < 1e-10);
    auto ev = eigenvalues_A(s.a, s.grid);
    CHECK(ev.back() > 0.0);
    double slope = decay_exponent(ev, 4, 128 / 4);
    CHECK(slope == doctest::Approx(-1.0).epsilon(0.2));
  }
}

TEST_CASE("Nystrom rows agree with graded quadrature of the kernels") {
  const double b = 1.0;
  for (const Curve& c : {disk(), ellipse()}) {
    Setup s = setup(c, 128, b);
    for (int i : {0, 37}) {
      const double t0 = s.grid.theta[i];
      const Point x = s.grid.points[i];
      for (int mode : {0, 3}) {
        BoundaryDensity h = [mode](double t) { return std::complex<double>(std::cos(mode * t), 0.0); };
        Eigen::VectorXcd hv(s.grid.n);
        for (int k = 0; k < s.grid.n; ++k) hv(k) = h(s.grid.theta[k]);
        auto ga = graded_row(c, t0, [&](Point y, Point) { return kernel_a(b, x, y); }, h);
        // x - y loses all relative accuracy below s ~ 1e-5, so the B row stops there
        Point d1 = c.d1(t0), d2 = c.d2(t0);
        double speed = std::hypot(d1.x, d1.y);
        double limit_b = (d1.x * d2.y - d1.y * d2.x) / (4 * kPi * speed * speed);
        auto gb = graded_row(c, t0, [&](Point y, Point nu) { return kernel_b(b, x, y, nu); }, h, 18, limit_b);
        std::complex<double> na = (s.a.entries * hv)(i), nb = (s.b.entries * hv)(i);
        INFO("row " << i << ", mode " << mode);
        CHECK(std::abs(na - ga) < 1e-10);
        CHECK(std::abs(nb - gb) < 1e-10);
      }
    }
  }
}

TEST_CASE("A and B self-converge under grid doubling") {
  auto one_a_one = [](const Setup& s) {
    Eigen::VectorXcd one = Eigen::VectorXcd::Ones(s.grid.n);
    return inner(s.grid, s.a.entries * one, one);
  };
  Setup e64 = setup(ellipse(), 64), e128 = setup(ellipse(), 128);
  auto v64 = one_a_one(e64), v128 = one_a_one(e128);
  CHECK(std::abs(v64 - v128) < 1e-6 * std::abs(v128));
  CHECK(std::fabs(v128.imag()) < 1e-12 * std::abs(v128));

  Setup d128 = setup(disk(), 128), d256 = setup(disk(), 256);
  auto s128 = singular_values(d128.b, d128.grid), s256 = singular_values(d256.b, d256.grid);
  CHECK(std::fabs(s128[0] - s256[0]) < 1e-4 * s256[0]);
  // compactness proxy
  CHECK(s256[10] < s256[0] / 10.0);
  auto c128 = robin_threshold(d128.b, d128.grid), c256 = robin_threshold(d256.b, d256.grid);
  CHECK(c256.c0 > 1.0);
  CHECK(std::fabs(c128.c0 - c256.c0) < 1e-3);
  // B is not forced to be Hermitian; its asymmetry is finite
  CHECK(std::isfinite(asymmetry(d128.b, d128.grid)));
}

TEST_CASE("build_T hypotheses, limits and positivity") {
  Setup s = setup(disk(), 128);
  RobinThreshold c0 = robin_threshold(s.b, s.grid);
  CHECK(c0.c0 > 1.0);
  CHECK_THROWS_AS(build_T(s.a, s.b, s.grid, RobinFunction::uniform(0.5 * c0.c0), c0), HypothesisError);
  CHECK_THROWS_AS(build_T(s.a, s.b, s.grid, RobinFunction::uniform(1.2 * c0.c0), c0, 1.5), HypothesisError);

  TOperator t2 = build_T(s.a, s.b, s.grid, RobinFunction::uniform(2.0 * c0.c0), c0);
  CHECK(t2.rcond_plus > 1e-6);
  CHECK(t2.rcond_minus > 1e-6);
  CHECK(t2.t.entries.rows() == s.grid.n);
  CHECK(t2.t.entries.cols() == s.grid.n);

  TOperator big = build_T(s.a, s.b, s.grid, RobinFunction::uniform(1e4), c0);
  Eigen::MatrixXcd ainv = s.a.entries.inverse();
  CHECK((big.t.entries - ainv).norm() < 1e-2 * ainv.norm());

  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  TOperator t5 = build_T(s.a, s.b, s.grid, RobinFunction::uniform(5.0), c0);
  for (int r = 0; r < 5; ++r) {
    Eigen::VectorXcd u(s.grid.n);
    for (int k = 0; k < s.grid.n; ++k) u(k) = nd(rng);
    std::complex<double> form = inner(s.grid, t5.t.entries * u, u);
    CHECK(form.real() > 0.0);
    CHECK(std::fabs(form.imag()) < 1e-8 * form.real());
  }
  RayleighReport rr = rayleigh_bound(t5.t, s.grid);
  CHECK(rr.min_ratio > 0.0);
  CHECK(std::isfinite(rr.constant));
  CHECK(rr.constant > 1.0);
}

TEST_CASE("T is self-adjoint off the disk up to discretization") {
  double prev = 1.0;
  for (int n : {64, 128, 256}) {
    Setup s = setup(ellipse(), n);
    RobinThreshold c0 = robin_threshold(s.b, s.grid);
    TOperator t = build_T(s.a, s.b, s.grid, RobinFunction::uniform(5.0), c0);
    double asym = asymmetry(t.t, s.grid);
    INFO("N = " << n);
    CHECK(asym < prev / 4.0);
    prev = asym;
  }
  CHECK(prev < 1e-6);
}

TEST_CASE("single-layer jump relation converges along eps = 10/N") {
  for (int mode : {0, 1}) {
    BoundaryDensity h = [mode](double t) { return std::complex<double>(std::cos(mode * t), 0.0); };
    double prev = 1e300, prev_cont = 1e300;
    for (int n : {64, 128, 256}) {
      JumpReport j = check_jump_single_layer(disk(), n, 1.0, h, 10.0 / n);
      INFO("mode " << mode << ", N = " << n << ", error " << j.jump_error);
      // observed order in eps approaching 1
      CHECK(j.jump_error < prev / (n == 256 ? 1.87 : 1.7));
      CHECK(j.continuity < prev_cont);
      prev = j.jump_error;
      prev_cont = j.continuity;
    }
  }
  BoundaryDensity one = [](double) { return std::complex<double>(1.0, 0.0); };
  CHECK_THROWS_AS(check_jump_single_layer(disk(), 64, 1.0, one, 1e-3), DomainError);
}

TEST_CASE("Green identity residuals") {
  auto density = [](const QuadGrid<double>& g, int mode) {
    std::vector<std::complex<double>> h(g.n);
    for (int k = 0; k < g.n; ++k) h[k] = std::cos(mode * g.theta[k]) + 0.3;
    return h;
  };
  RobinFunction g5 = RobinFunction::uniform(5.0);
  Setup d256 = setup(disk(), 256);
  GreenReport r = check_green_identity(d256.a, d256.b, d256.grid, g5, density(d256.grid, 2));
  CHECK(r.exterior < 1e-3);
  CHECK(r.interior < 1e-3);
  GreenReport shifted = check_green_identity(d256.a, d256.b, d256.grid, g5.shifted(3.0), density(d256.grid, 2));
  CHECK(std::fabs(shifted.exterior - r.exterior) < 1e-12);
  CHECK(r.literal_exterior > 0.1);

  const double floor = 1e-12;
  for (const Curve& c : {disk(), ellipse()}) {
    Setup s128 = setup(c, 128), s256 = setup(c, 256);
    for (int mode : {0, 3}) {
      GreenReport a = check_green_identity(s128.a, s128.b, s128.grid, g5, density(s128.grid, mode));
      GreenReport b = check_green_identity(s256.a, s256.b, s256.grid, g5, density(s256.grid, mode));
      INFO("mode " << mode << ": " << a.exterior << " -> " << b.exterior);
      CHECK((b.exterior <= 0.5 * a.exterior || std::max(a.exterior, b.exterior) < floor));
      CHECK((b.interior <= 0.5 * a.interior || std::max(a.interior, b.interior) < floor));
    }
  }
}

TEST_CASE("assembly is deterministic") {
  Setup s1 = setup(ellipse(), 64), s2 = setup(ellipse(), 64);
  CHECK((s1.a.entries.array() == s2.a.entries.array()).all());
  CHECK((s1.b.entries.array() == s2.b.entries.array()).all());
  CHECK_THROWS_AS(assemble_A(build_grid<double>(disk(), 16), 1.0), DomainError);
}
