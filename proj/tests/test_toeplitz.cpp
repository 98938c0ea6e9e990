#include <doctest.h>

#include <cmath>
#include <string>

#include "magspec/numerics/special.hpp"
#include "magspec/toeplitz.hpp"

using namespace magspec;

namespace {

Curve ellipse(double rotation = 0.0, Point center = {0.0, 0.0}) {
  ShapeDescriptor d;
  d.kind = ShapeKind::ellipse;
  d.semi_a = 1.5;
  d.semi_b = 0.5;
  d.rotation = rotation;
  d.center = center;
  return build_curve(d);
}

Curve disk(double r) { return build_curve({ShapeKind::disk, {0.0, 0.0}, r}); }

double rel(const BigReal& a, const BigReal& b) { return abs(BigReal(a - b)).to_double() / abs(b).to_double(); }

double rho(const BigReal& s, int j) {
  return exp((log_gamma(BigReal(j + 1.0, s.precision())) + log(s)) / static_cast<double>(j)).to_double();
}

}  // namespace

TEST_CASE("disk closed form and the radial quadrature oracle") {
  Precision p{512};
  auto s = disk_spectrum(1, 2.0, 1.0, 60, p);
  REQUIRE(s.eigenvalues.size() == 60);
  BigReal first = 1.0 - exp(BigReal(-1.0, p));
  CHECK(rel(s.eigenvalues[0], first) < 1e-140);
  auto r = disk_spectrum(1, 2.0, 1.0, 60, p, DiskChannel::radial);
  double worst = 0.0;
  for (int j = 0; j < 60; ++j) worst = std::max(worst, rel(s.eigenvalues[j], r.eigenvalues[j]));
  CHECK(worst < 1e-100);
  CHECK(r.error < 1e-100);
  CHECK_THROWS_AS(disk_spectrum(2, 2.0, 1.0, 10, p, DiskChannel::closed_form), DomainError);
}

TEST_CASE("disk spectra are bounded by one, decreasing and super-exponential") {
  Precision p{512};
  for (int n : {1, 2}) {
    auto s = disk_spectrum(n, 2.0, 1.0, 60, p);
    INFO("level " << n);
    for (int j = 0; j < 60; ++j) {
      CHECK(s.eigenvalues[j] > 0.0);
      CHECK(s.eigenvalues[j] <= 1.0);
      // level 2 at b R^2 / 2 = 1 has the triple value 1 - 2/e in sectors 0, 1, 2
      if (j > 0) CHECK(s.eigenvalues[j] <= s.eigenvalues[j - 1]);
    }
    if (n == 2) CHECK(rel(s.eigenvalues[2], 1.0 - 2.0 * exp(BigReal(-1.0, p))) < 1e-140);
    double prev = 1.0;
    for (int j = 10; j + 1 < 60; ++j) {
      double ratio = (s.eigenvalues[j + 1] / s.eigenvalues[j]).to_double();
      CHECK(ratio < prev);
      prev = ratio;
    }
  }
  // chi_U -> 1 as the disk grows
  auto big = disk_spectrum(1, 1.0, 12.0, 20, Precision{256});
  for (const auto& v : big.eigenvalues) CHECK(v > 1.0 - 1e-10);
  auto big2 = disk_spectrum(2, 1.0, 12.0, 20, Precision{256});
  for (const auto& v : big2.eigenvalues) CHECK(v > 1.0 - 1e-10);
}

TEST_CASE("rho_j of the unit disk approaches b R^2 / 2") {
  Precision p{512};
  auto s = disk_spectrum(1, 2.0, 1.0, 60, p);
  double prev = 0.0;
  for (int j = 1; j <= 60; ++j) {
    double r = rho(s.eigenvalues[j - 1], j);
    CHECK(r > prev);
    CHECK(r < 1.0);
    prev = r;
  }
  CHECK(prev > 0.98);
  auto s2 = disk_spectrum(2, 2.0, 1.0, 60, p);
  CHECK(rho(s2.eigenvalues[59], 60) == doctest::Approx(1.0).epsilon(0.15));
  CHECK(rho(s2.eigenvalues[59], 60) < rho(s2.eigenvalues[39], 40));
}

TEST_CASE("insufficient precision names the required bits") {
  try {
    disk_spectrum(1, 2.0, 1.0, 60, Precision{256});
    FAIL("expected PrecisionError");
  } catch (const PrecisionError& e) {
    auto exact = disk_spectrum(1, 2.0, 1.0, 60, Precision{512});
    CHECK(e.required_bits() == required_bits(exact.eigenvalues));
    CHECK(e.required_bits() > 256);
    CHECK(std::string(e.what()).find(std::to_string(e.required_bits())) != std::string::npos);
  }
  CHECK_NOTHROW(disk_spectrum(1, 2.0, 1.0, 30, Precision{256}));
}

TEST_CASE("monotonicity in the domain") {
  Precision p{256};
  for (int n : {1, 2}) {
    auto small = disk_spectrum(n, 1.0, 0.8, 25, p), large = disk_spectrum(n, 1.0, 1.0, 25, p);
    for (int j = 0; j < 25; ++j) CHECK(small.eigenvalues[j] < large.eigenvalues[j]);
  }
  GalerkinOptions o;
  o.stable_count = 20;
  auto e = galerkin_spectrum(1, 1.0, ellipse(), 40, p, o);
  auto inner = disk_spectrum(1, 1.0, 0.5, 20, p), outer = disk_spectrum(1, 1.0, 1.5, 20, p);
  for (int j = 0; j < 20; ++j) {
    CHECK(inner.eigenvalues[j] < e.eigenvalues[j]);
    CHECK(e.eigenvalues[j] < outer.eigenvalues[j]);
  }
}

TEST_CASE("Galerkin reproduces the disk spectra") {
  Precision p{256};
  GalerkinOptions o;
  o.stable_count = 20;
  auto g = galerkin_spectrum(1, 2.0, disk(1.0), 60, p, o);
  auto s = disk_spectrum(1, 2.0, 1.0, 20, p);
  for (int j = 0; j < 20; ++j) CHECK(abs(BigReal(g.eigenvalues[j] - s.eigenvalues[j])).to_double() < 1e-12);
  CHECK(g.error < 1e-20);

  o.stable_count = 10;
  auto g2 = galerkin_spectrum(2, 1.0, disk(1.0), 30, p, o);
  auto s2 = disk_spectrum(2, 1.0, 1.0, 10, p);
  for (int j = 0; j < 10; ++j) CHECK(rel(g2.eigenvalues[j], s2.eigenvalues[j]) < 1e-12);
}

TEST_CASE("Galerkin spectrum is invariant under rotation and translation") {
  Precision p{256};
  GalerkinOptions o;
  o.stable_count = 20;
  o.check_stability = false;
  auto base = galerkin_spectrum(1, 1.0, ellipse(), 40, p, o);
  auto turned = galerkin_spectrum(1, 1.0, ellipse(0.7), 40, p, o);
  auto moved = galerkin_spectrum(1, 1.0, ellipse(0.0, {0.6, -0.4}), 40, p, o);
  for (int j = 0; j < 20; ++j) {
    CHECK(abs(BigReal(base.eigenvalues[j] - turned.eigenvalues[j])).to_double() < 1e-10);
    CHECK(rel(base.eigenvalues[j], turned.eigenvalues[j]) < 1e-10);
    CHECK(rel(base.eigenvalues[j], moved.eigenvalues[j]) < 1e-30);
  }
}

TEST_CASE("ellipse rho_j trends toward b Cap^2 / 2") {
  Precision p{256};
  GalerkinOptions o;
  o.stable_count = 30;
  auto e = galerkin_spectrum(1, 1.0, ellipse(), 50, p, o);
  CHECK(e.error < 1e-6);
  REQUIRE(e.eigenvalues.size() == 30);
  double prev = 0.0;
  for (int j = 4; j <= 30; ++j) {
    double r = rho(e.eigenvalues[j - 1], j);
    CHECK(r > prev);
    CHECK(r < 0.5);
    prev = r;
  }
  CHECK(prev > 0.48);
}

TEST_CASE("under-resolved Galerkin runs are reported") {
  Precision p{256};
  GalerkinOptions coarse;
  coarse.angular_nodes = 6;
  coarse.check_stability = false;
  CHECK_THROWS_AS(galerkin_spectrum(1, 1.0, disk(8.0), 30, p, coarse), ConvergenceError);
  GalerkinOptions strict;
  strict.stable_count = 30;
  strict.stability_tolerance = 1e-6;
  CHECK_THROWS_AS(galerkin_spectrum(1, 1.0, ellipse(), 32, p, strict), ConvergenceError);
}

TEST_CASE("sandwich_check on nested Toeplitz spectra") {
  Precision p{256};
  GalerkinOptions o;
  o.stable_count = 20;
  auto e = galerkin_spectrum(1, 1.0, ellipse(), 40, p, o);
  auto inner = disk_spectrum(1, 1.0, 0.4, 20, p), outer = disk_spectrum(1, 1.0, 1.6, 20, p);
  SandwichReport r = sandwich_check(e.eigenvalues, inner, outer);
  CHECK(r.holds());
  CHECK(std::isfinite(r.c0));
  CHECK(std::isfinite(r.c1));
  CHECK(r.c0_full == doctest::Approx(r.c0));
  SandwichReport swapped = sandwich_check(e.eigenvalues, outer, inner);
  CHECK_FALSE(swapped.holds());
  // identical spectra: both constants vanish
  SandwichReport same = sandwich_check(inner.eigenvalues, inner, inner);
  CHECK(same.holds());
  CHECK(same.c0 == 0.0);
  CHECK(same.c1 == 0.0);
}
