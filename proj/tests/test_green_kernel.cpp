#include <doctest.h>

#include <cmath>
#include <random>

#include "magspec/green_kernel.hpp"
#include "magspec/numerics/quadrature.hpp"

using namespace magspec;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::complex<double> g0(double b, Point x, Point y) { return to_std(g0_integral<double>(b, x, y).value); }

// Independent route: the heat-kernel time integral directly in s = e^sigma,
// Gauss-Legendre panels on sigma in [-40, 8].
std::complex<double> g0_time_integral(double b, Point x, Point y) {
  const auto& gl = gauss_legendre<double>(40, {53});
  double r2 = dist2(x, y);
  double acc = 0.0;
  for (int k = 0; k < 96; ++k) {
    double a = -40.0 + 0.5 * k, c = a + 0.5;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      double sigma = 0.5 * (c - a) * gl.nodes[i] + 0.5 * (c + a);
      double s = std::exp(sigma);
      double f = b / (4 * kPi * std::sinh(b * s)) * std::exp(-b * r2 / (4 * std::tanh(b * s)));
      acc += 0.5 * (c - a) * gl.weights[i] * f * s;
    }
  }
  return std::polar(acc, -0.5 * b * wedge(x, y));
}

}  // namespace

TEST_CASE("g0_integral symmetry and positivity") {
  Point x{0.3, 0.9}, y{-1.1, 0.2};
  auto gxy = g0(1.0, x, y), gyx = g0(1.0, y, x);
  CHECK(std::abs(gxy - std::conj(gyx)) < 1e-16);
  auto col = g0(1.0, {0.5, 0.5}, {2.0, 2.0});
  CHECK(col.real() > 0.0);
  CHECK(std::fabs(col.imag()) < 1e-17);
  CHECK_THROWS_AS(g0(1.0, x, x), DomainError);
  CHECK_THROWS_AS(g0(1.0, x, {x.x + 5e-7, x.y}), DomainError);
  CHECK_NOTHROW(g0(1.0, x, {x.x + 1e-6, x.y}));
}

TEST_CASE("g0_integral agrees with the time-domain quadrature") {
  for (double b : {0.5, 1.0, 2.0}) {
    for (Point y : {Point{0.0, 0.0}, Point{0.7, -0.2}}) {
      for (double r : {1e-3, 0.1, 1.0, 3.0}) {
        Point x{y.x + r * 0.6, y.y + r * 0.8};
        auto a = g0(b, x, y), ref = g0_time_integral(b, x, y);
        INFO("b = " << b << ", r = " << r);
        CHECK(std::abs(a - ref) < 1e-13 * std::abs(ref));
      }
    }
  }
}

TEST_CASE("g0_series cross-validates g0_integral") {
  auto s = g0_series<double>(1.0, {1.0, 0.0}, {0.0, 0.0}, 4000);
  auto v = g0_integral<double>(1.0, {1.0, 0.0}, {0.0, 0.0});
  CHECK(abs(s.value - v.value) < 1e-8);

  auto s2 = g0_series<double>(1.0, {1.2, 0.4}, {-0.3, -0.9}, 200);
  auto v2 = g0_integral<double>(1.0, {1.2, 0.4}, {-0.3, -0.9});
  CHECK(abs(s2.value - v2.value) < 1e-8);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  int count = 0;
  for (double b : {0.5, 1.0, 2.0}) {
    for (int k = 0; k < 7 && count < 20; ++k, ++count) {
      double r = 0.5 + 2.5 * u(rng), a = 2 * kPi * u(rng);
      Point y{2 * u(rng) - 1, 2 * u(rng) - 1};
      Point x{y.x + r * std::cos(a), y.y + r * std::sin(a)};
      auto sv = g0_series<double>(b, x, y, 20000, 2e-9);
      worst = std::max(worst, abs(sv.value - g0_integral<double>(b, x, y).value));
    }
  }
  CHECK(count == 20);
  CHECK(worst < 1e-8);

  auto sy = g0_series<double>(1.0, {0.0, 0.0}, {1.0, 0.0}, 4000);
  CHECK(abs(sy.value - conj(s.value)) < 1e-16);
  CHECK_THROWS_AS(g0_series<double>(1.0, {0.1, 0.0}, {0.0, 0.0}, 50), ConvergenceError);
}

TEST_CASE("Gaussian decay matches the large-separation asymptotics") {
  // |G0| ~ e^{-rho/2} / (4 sqrt(pi rho)), rho = b r^2 / 2
  for (double b : {0.5, 1.0, 2.0}) {
    for (double r : {6.0, 8.0}) {
      double rho = 0.5 * b * r * r;
      double asym = std::exp(-0.5 * rho) / (4.0 * std::sqrt(kPi * rho));
      double v = std::abs(g0(b, {r, 0.0}, {0.0, 0.0}));
      CHECK(v == doctest::Approx(asym).epsilon(0.04));
      CHECK(v == doctest::Approx(asym * (1.0 - 0.25 / rho)).epsilon(0.004));
    }
  }
  double v6 = std::abs(g0(1.0, {6.0, 0.0}, {0.0, 0.0}));
  CHECK(v6 == doctest::Approx(4.049e-6).epsilon(1e-3));
  auto s6 = g0_series<double>(1.0, {6.0, 0.0}, {0.0, 0.0}, 200);
  CHECK(std::fabs(v6 - abs(s6.value)) < 1e-9);
}

TEST_CASE("quadrature refinement and error estimate") {
  Precision p{256};
  for (double r : {1e-6, 1e-2, 0.5, 2.0, 6.0}) {
    Point x{r, 0.0}, y{0.0, 0.0};
    auto v = g0_integral<double>(1.0, x, y);
    auto v2 = g0_integral<double>(1.0, x, y, {32, 0.0});
    CHECK(abs(v.value - v2.value) < 1e-10 * std::max(1.0, abs(v.value)));
    auto ref = g0_integral<BigReal>(1.0, {BigReal(r, p), BigReal(0.0, p)}, {BigReal(0.0, p), BigReal(0.0, p)});
    double true_err = std::abs(to_std(v.value) - to_std(ref.value));
    INFO("r = " << r << ", estimate " << v.error << ", actual " << true_err);
    CHECK(true_err <= 10.0 * v.error);
    CHECK(ref.error < 1e-60);
  }
}

TEST_CASE("|G0| is invariant under simultaneous rotation") {
  Point x{0.8, -0.3}, y{-0.4, 1.2};
  double base = std::abs(g0(1.0, x, y));
  for (double a : {0.4, 2.2, 5.1}) {
    double c = std::cos(a), s = std::sin(a);
    Point rx{c * x.x - s * x.y, s * x.x + c * x.y}, ry{c * y.x - s * y.y, s * y.x + c * y.y};
    CHECK(std::abs(g0(1.0, rx, ry)) == doctest::Approx(base).epsilon(1e-14));
  }
}

TEST_CASE("g0_normal_derivative against finite differences") {
  const double b = 1.0, h = 1e-4;
  for (Point y : {Point{0.0, 0.0}, Point{0.6, -0.4}}) {
    Point x{1.1, 0.7};
    for (double a : {0.3, 2.0, 4.4}) {
      Point nu{std::cos(a), std::sin(a)};
      auto d = to_std(g0_normal_derivative<double>(b, x, y, nu).value);
      auto fd = (g0(b, x, {y.x + h * nu.x, y.y + h * nu.y}) - g0(b, x, {y.x - h * nu.x, y.y - h * nu.y})) / (2 * h);
      // + i b nu . A0(y), A0(y) = (-y2, y1)/2
      std::complex<double> gauge = std::complex<double>(0.0, b * 0.5 * (-nu.x * y.y + nu.y * y.x)) * g0(b, x, y);
      CHECK(std::abs(d - (fd + gauge)) < 1e-6);
      if (y.x == 0.0 && y.y == 0.0) CHECK(std::abs(d - fd) < 1e-6);
    }
  }
}

TEST_CASE("normal derivative is the conjugate of the first-argument covariant gradient") {
  const double b = 1.5;
  Point x{0.2, -0.9}, y{1.3, 0.4};
  for (double a : {0.0, 1.0, 2.5}) {
    Point nu{std::cos(a), std::sin(a)};
    auto d = to_std(g0_normal_derivative<double>(b, x, y, nu).value);
    auto gr = g0_gradient_x(b, y, x);
    auto alt = std::conj(nu.x * gr.dx + nu.y * gr.dy);
    CHECK(std::abs(d - alt) < 1e-15);
  }
  // gradient against finite differences with the -i b A0(x) term
  const double h = 1e-4;
  auto gr = g0_gradient_x(b, x, y);
  auto fdx = (g0(b, {x.x + h, x.y}, y) - g0(b, {x.x - h, x.y}, y)) / (2 * h);
  auto fdy = (g0(b, {x.x, x.y + h}, y) - g0(b, {x.x, x.y - h}, y)) / (2 * h);
  std::complex<double> i(0.0, 1.0);
  CHECK(std::abs(gr.dx - (fdx - i * b * 0.5 * (-x.y) * g0(b, x, y))) < 1e-6);
  CHECK(std::abs(gr.dy - (fdy - i * b * 0.5 * x.x * g0(b, x, y))) < 1e-6);
}

TEST_CASE("diagonal_fit recovers the logarithmic singularity") {
  auto radii = default_fit_radii();
  for (double b : {0.5, 1.0, 2.0}) {
    for (Point x : {Point{0.0, 0.0}, Point{1.0, 0.5}, Point{-2.0, 1.5}}) {
      for (int k = 0; k < 4; ++k) {
        double a = 0.4 + k * kPi / 2;
        DiagonalFit f = diagonal_fit(b, x, {std::cos(a), std::sin(a)}, radii);
        CHECK(f.slope == doctest::Approx(1.0 / (2 * kPi)).epsilon(1e-8));
        CHECK(std::fabs(f.intercept - diagonal_intercept_reference(b)) < 1e-9);
      }
    }
  }
  CHECK(diagonal_intercept_reference(1.0) == doctest::Approx((3 * std::log(2.0) - 0.5772156649015329) / (4 * kPi)));
  CHECK_THROWS_AS(diagonal_fit(1.0, {0, 0}, {1, 0}, {1e-7, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2}), DomainError);
  CHECK_THROWS_AS(diagonal_fit(1.0, {0, 0}, {1, 0}, {1e-6, 1e-5}), DomainError);
}
