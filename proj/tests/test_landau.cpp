#include <doctest.h>

#include <cmath>
#include <random>

#include "magspec/landau.hpp"
#include "magspec/numerics/quadrature.hpp"

using namespace magspec;

namespace {

constexpr double kPi = 3.14159265358979323846;
const Precision P256{256};

Vec2<BigReal> big(Point p) { return {BigReal(p.x, P256), BigReal(p.y, P256)}; }

// max relative coefficient mismatch between two polynomial parts
double coefficient_gap(const LandauFunction<BigReal>& f, const LandauFunction<BigReal>& g, double scale) {
  double gap = 0.0, ref = 0.0;
  auto key = [](const Monomial<BigReal>& t) { return std::make_pair(t.p, t.q); };
  for (const auto& a : f.terms) {
    ref = std::max(ref, abs(a.c).to_double());
    bool found = false;
    for (const auto& b : g.terms) {
      if (key(a) != key(b)) continue;
      found = true;
      BigComplex d = a.c - BigComplex(b.c.re * scale, b.c.im * scale);
      gap = std::max(gap, abs(d).to_double());
    }
    if (!found) gap = std::max(gap, abs(a.c).to_double());
  }
  return ref > 0 ? gap / ref : gap;
}

PlaneFunction sampled(const LandauFunction<double>& f) {
  return [f](Point x) { return to_std(f({x.x, x.y})); };
}

}  // namespace

TEST_CASE("landau_level examples") {
  CHECK(landau_level(LevelIndex(1), MagneticField(1.0)) == 1.0);
  CHECK(landau_level(LevelIndex(2), MagneticField(1.5)) == 4.5);
  for (double b : {0.3, 1.0, 7.0}) CHECK(landau_level(LevelIndex(1), MagneticField(b)) == b);
  CHECK_THROWS_AS(LevelIndex(0), DomainError);
  CHECK_THROWS_AS(MagneticField(0.0), DomainError);
}

TEST_CASE("Q annihilates the lowest level and Qbar Q acts as Lambda_n - b") {
  const double b = 1.25;
  for (int m = 0; m < 6; ++m) {
    auto psi = basis_function<BigReal>(1, m, b, P256);
    CHECK(apply_annihilation(psi).terms.empty());
  }
  for (int n = 1; n <= 4; ++n) {
    for (int m = 0; m < 6; ++m) {
      auto psi = basis_function<BigReal>(n, m, b, P256);
      auto qq = apply_creation(apply_annihilation(psi));
      double lambda_minus_b = landau_level(LevelIndex(n), MagneticField(b)) - b;
      if (n == 1) {
        CHECK(qq.terms.empty());
      } else {
        CHECK(qq.terms.size() == psi.terms.size());
        CHECK(coefficient_gap(qq, psi, lambda_minus_b) < 1e-60);
      }
    }
  }
  // [Q, Qbar] = 2b, checked pointwise
  auto psi = basis_function<BigReal>(3, 2, b, P256);
  Vec2<BigReal> x = big({0.4, -0.7});
  BigComplex lhs_v = apply_annihilation(apply_creation(psi))(x) - apply_creation(apply_annihilation(psi))(x);
  BigComplex rhs_v = psi(x) * BigReal(2 * b, P256);
  CHECK(abs(lhs_v - rhs_v).to_double() < 1e-60);
}

TEST_CASE("eigenfunction property on a refinement-checked stencil") {
  const double b = 1.0;
  StencilSpec spec{0.01, 1e-9};
  for (int n = 1; n <= 3; ++n) {
    for (int m : {0, 2, 5}) {
      auto psi = basis_function<double>(n, m, b, {53});
      PlaneFunction f = sampled(psi);
      PlaneFunction qf = apply_annihilation(f, b, spec);
      double num = 0.0, den = 0.0;
      for (double r : {0.3, 1.1, 2.0, 3.2}) {
        for (int k = 0; k < 8; ++k) {
          Point x{r * std::cos(0.7 * k + 0.1), r * std::sin(0.7 * k + 0.1)};
          StencilValue v = creation_at(qf, b, x, spec);
          std::complex<double> lhs = v.value + b * f(x);
          std::complex<double> rhs = landau_level(LevelIndex(n), MagneticField(b)) * f(x);
          num += std::norm(lhs - rhs);
          den += std::norm(f(x));
        }
      }
      INFO("n = " << n << ", m = " << m);
      CHECK(std::sqrt(num / den) < 1e-10);
    }
  }
}

TEST_CASE("stencil too coarse is reported") {
  auto psi = basis_function<double>(2, 8, 1.0, {53});
  PlaneFunction qf = apply_annihilation(sampled(psi), 1.0, {0.5, 1e-9});
  CHECK_THROWS_AS(qf({1.0, 0.5}), ConvergenceError);
}

TEST_CASE("Qbar is the adjoint of Q on Gaussian-decaying functions") {
  const double b = 1.0;
  PlaneFunction f = [](Point x) {
    return std::complex<double>(1.0 + x.x, 0.5 * x.y) * std::exp(-0.6 * (x.x * x.x + x.y * x.y));
  };
  PlaneFunction g = [](Point x) {
    return std::complex<double>(x.y - 0.2, x.x * x.x) * std::exp(-0.4 * ((x.x - 0.3) * (x.x - 0.3) + x.y * x.y));
  };
  PlaneQuadrature q{{0.0, 0.0}, 9.0, 12, 16, 48, 1e-12};
  PlaneRule rule = plane_rule(q);
  StencilSpec spec{0.01, 1e-8};
  std::complex<double> lhs = 0.0, rhs = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    Point y = rule.nodes[k];
    lhs += creation_at(f, b, y, spec).value * std::conj(g(y)) * rule.weights[k];
    rhs += f(y) * std::conj(annihilation_at(g, b, y, spec).value) * rule.weights[k];
  }
  CHECK(std::abs(lhs - rhs) < 1e-9 * std::abs(lhs));
}

TEST_CASE("projection_kernel examples") {
  for (int n = 1; n <= 3; ++n) {
    for (double b : {0.5, 1.0, 2.0}) {
      Point x{0.3, -1.2};
      auto v = projection_kernel<double>(n, b, x, x);
      CHECK(v.re == doctest::Approx(b / (2 * kPi)).epsilon(1e-15));
      CHECK(std::fabs(v.im) < 1e-16);
    }
  }
  auto v = projection_kernel<BigReal>(1, 1.0, big({1, 0}), big({0, 0}));
  auto oracle = projection_kernel_basis_sum<BigReal>(1, 1.0, big({1, 0}), big({0, 0}), 60, P256);
  CHECK(v.re.to_double() == doctest::Approx(std::exp(-0.25) / (2 * kPi)).epsilon(1e-15));
  CHECK(abs(v - oracle).to_double() < 1e-40);

  // rotation invariance of |P_n|, Hermitian symmetry
  Point x{0.8, 0.4}, y{-0.5, 1.1};
  for (int n = 1; n <= 3; ++n) {
    double base = abs(projection_kernel<double>(n, 1.0, x, y));
    for (double a : {0.3, 1.7, 4.0}) {
      auto rot = [a](Point p) { return Point{std::cos(a) * p.x - std::sin(a) * p.y, std::sin(a) * p.x + std::cos(a) * p.y}; };
      CHECK(abs(projection_kernel<double>(n, 1.0, rot(x), rot(y))) == doctest::Approx(base).epsilon(1e-14));
    }
    auto pxy = projection_kernel<double>(n, 1.0, x, y);
    auto pyx = projection_kernel<double>(n, 1.0, y, x);
    CHECK(pxy.re == doctest::Approx(pyx.re).epsilon(1e-15));
    CHECK(pxy.im == doctest::Approx(-pyx.im).epsilon(1e-15));
  }
}

TEST_CASE("closed-form kernel agrees with the basis-sum oracle") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int n = 1; n <= 3; ++n) {
    for (double b : {0.5, 1.0, 2.0}) {
      for (int s = 0; s < 3; ++s) {
        Point x{3 * u(rng), 3 * u(rng)}, y{3 * u(rng), 3 * u(rng)};
        double sx = std::min(1.0, 3.0 / std::hypot(x.x, x.y)), sy = std::min(1.0, 3.0 / std::hypot(y.x, y.y));
        x = {x.x * sx, x.y * sx};
        y = {y.x * sy, y.y * sy};
        auto closed = projection_kernel<BigReal>(n, b, big(x), big(y));
        auto sum = projection_kernel_basis_sum<BigReal>(n, b, big(x), big(y), 110, P256);
        worst = std::max(worst, abs(closed - sum).to_double());
      }
    }
  }
  CHECK(worst < 1e-15);
}

TEST_CASE("basis Gram matrix is the identity to 1e-20 at 256 bits") {
  const double b = 1.0;
  for (auto [n, count] : {std::pair{1, 40}, std::pair{2, 24}}) {
    auto basis = landau_basis<BigReal>(n, b, count, P256);
    const int n_theta = count + n + 4;
    const double radius = std::sqrt(2.0 * (count + n + 10.0 * std::sqrt(count + n) + 60.0) / b);
    const int panels = static_cast<int>(std::ceil(radius / 3.0));
    const auto& gl = gauss_legendre<BigReal>(24, P256);
    BigReal two_pi = BigReal::pi(P256) * 2.0;
    BigReal dt = two_pi / static_cast<double>(n_theta);
    BigReal dr = BigReal(radius, P256) / static_cast<double>(panels);
    std::vector<BigComplex> gram(count * count, BigComplex::zero(P256));
    for (int pnl = 0; pnl < panels; ++pnl) {
      for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
        BigReal r = dr * (gl.nodes[i] + 1.0) * 0.5 + dr * static_cast<double>(pnl);
        BigReal w = dr * gl.weights[i] * 0.5 * r * dt;
        for (int j = 0; j < n_theta; ++j) {
          BigReal t = dt * static_cast<double>(j);
          auto vals = basis.evaluate({r * cos(t), r * sin(t)});
          for (int a = 0; a < count; ++a) {
            BigComplex ca = conj(vals[a]) * w;
            for (int c = a; c < count; ++c) gram[a * count + c] += ca * vals[c];
          }
        }
      }
    }
    double worst = 0.0;
    for (int a = 0; a < count; ++a)
      for (int c = a; c < count; ++c) {
        BigComplex g = gram[a * count + c];
        if (a == c) g.re -= 1.0;
        worst = std::max(worst, abs(g).to_double());
      }
    INFO("n = " << n);
    CHECK(worst < 1e-20);
  }
}

TEST_CASE("reproducing property of the projection kernel") {
  for (int n = 1; n <= 2; ++n) {
    Point x{0.4, -0.3}, y{-0.6, 0.5};
    PlaneQuadrature q{{-0.1, 0.1}, 13.0, 16, 20, 72, 1e-12};
    PlaneFunction f = [&](Point z) { return to_std(projection_kernel<double>(n, 1.0, z, y)); };
    auto v = project(n, 1.0, f, {x}, q);
    auto exact = to_std(projection_kernel<double>(n, 1.0, x, y));
    CHECK(std::abs(v[0] - exact) < 1e-11);
  }
}

TEST_CASE("project fixes its own level, kills other levels, and reduces radially") {
  const double b = 1.0;
  PlaneQuadrature q{{0.0, 0.0}, 13.0, 16, 20, 64, 1e-12};
  std::vector<Point> pts{{0.5, 0.2}, {-1.0, 1.3}, {0.1, -2.0}};
  auto psi12 = basis_function<double>(1, 2, b, {53});
  auto psi22 = basis_function<double>(2, 2, b, {53});
  auto same = project(1, b, sampled(psi12), pts, q);
  auto other = project(1, b, sampled(psi22), pts, q);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CHECK(std::abs(same[i] - to_std(psi12({pts[i].x, pts[i].y}))) < 1e-11);
    CHECK(std::abs(other[i]) < 1e-11);
  }

  // Gaussian bump exp(-|y|^2): only angular momentum zero survives, so
  // P_1 f = psi_{1,0} <psi_{1,0}, f> with the inner product by 1D radial quadrature.
  PlaneFunction bump = [](Point y) { return std::complex<double>(std::exp(-(y.x * y.x + y.y * y.y)), 0.0); };
  const auto& gl = gauss_legendre<double>(40, {53});
  double c0 = 0.0;
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
    double r = 4.0 * (gl.nodes[i] + 1.0);
    c0 += 4.0 * gl.weights[i] * std::sqrt(b / (2 * kPi)) * std::exp(-b * r * r / 4) * std::exp(-r * r) * 2 * kPi * r;
  }
  auto pb = project(1, b, bump, pts, q);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double r2 = pts[i].x * pts[i].x + pts[i].y * pts[i].y;
    double expect = std::sqrt(b / (2 * kPi)) * std::exp(-b * r2 / 4) * c0;
    CHECK(std::abs(pb[i] - expect) < 1e-12);
  }

  PlaneQuadrature tight{{0.0, 0.0}, 2.0, 4, 16, 32, 1e-12};
  CHECK_THROWS_AS(project(1, b, bump, pts, tight), ConvergenceError);
}

TEST_CASE("recentered basis stays orthonormal and in the same level") {
  const double b = 1.0;
  Point c{0.7, -0.4};
  auto psi = basis_function<double>(2, 1, b, {53}, c);
  PlaneQuadrature q{c, 13.0, 16, 20, 64, 1e-12};
  std::vector<Point> pts{{0.5, 0.2}, {1.5, -1.0}};
  auto pv = project(2, b, sampled(psi), pts, q);
  for (std::size_t i = 0; i < pts.size(); ++i) CHECK(std::abs(pv[i] - to_std(psi({pts[i].x, pts[i].y}))) < 1e-11);
  auto other = project(1, b, sampled(psi), pts, q);
  for (auto v : other) CHECK(std::abs(v) < 1e-11);
}
