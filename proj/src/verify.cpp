#include "magspec/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <random>

#include "magspec/boundary_ops.hpp"
#include "magspec/capacity.hpp"
#include "magspec/cluster.hpp"
#include "magspec/errors.hpp"
#include "magspec/green_kernel.hpp"
#include "magspec/numerics/hermitian.hpp"
#include "magspec/numerics/special.hpp"
#include "magspec/toeplitz.hpp"

namespace magspec {

using nlohmann::json;

bool CriterionResult::passed() const {
  if (!error.empty() || checks.empty()) return false;
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

bool CriterionResult::blocking() const {
  if (!error.empty() || checks.empty()) return true;
  for (const auto& c : checks)
    if (!c.passed && !c.unattainable) return true;
  return false;
}

bool VerifyReport::ok() const {
  for (const auto& c : criteria)
    if (c.blocking()) return false;
  return true;
}

json VerifyReport::to_json() const {
  json out{{"schema", "magspec.verify/1"}, {"suite", suite}, {"ok", ok()}};
  json list = json::array();
  for (const auto& c : criteria) {
    json checks = json::array();
    for (const auto& k : c.checks)
      checks.push_back({{"label", k.label},
                        {"measured", k.measured},
                        {"target", k.target},
                        {"passed", k.passed},
                        {"unattainable", k.unattainable}});
    list.push_back({{"id", c.id},
                    {"title", c.title},
                    {"passed", c.passed()},
                    {"blocking", c.blocking()},
                    {"checks", checks},
                    {"error", c.error},
                    {"seconds", c.seconds}});
  }
  out["criteria"] = list;
  return out;
}

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string sci(double v, int digits = 3) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*e", digits - 1, v);
  return buf;
}

Check below(std::string label, double measured, double bound) {
  return {std::move(label), measured, "< " + sci(bound, 2), measured < bound};
}

std::string plain(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

Check within(std::string label, double value, double target, double rel) {
  double d = std::fabs(value - target) / std::fabs(target);
  return {std::move(label), value, plain(target) + " within " + plain(100 * rel) + "%", d <= rel};
}

Check truth(std::string label, bool ok, double measured = 0.0) {
  return {std::move(label), measured, "true", ok};
}

Curve disk(double r = 1.0) { return build_curve({ShapeKind::disk, {0.0, 0.0}, r}); }

Curve ellipse(double a, double c) {
  ShapeDescriptor d;
  d.kind = ShapeKind::ellipse;
  d.semi_a = a;
  d.semi_b = c;
  return build_curve(d);
}

Curve star(double r, double eps, int k) {
  ShapeDescriptor d;
  d.kind = ShapeKind::star;
  d.radius = r;
  d.epsilon = eps;
  d.lobes = k;
  return build_curve(d);
}

// Runs shared by several cluster criteria.
struct Cache {
  std::unique_ptr<GammaSweep> disk_sweep;      // gamma 5 and 10
  std::unique_ptr<ClusterSpectrum> ellipse;
};

ClusterProblem main_problem(const Curve& c) {
  ClusterProblem p(c);
  p.b = 1.0;
  p.n = 1;
  p.grid_size = 256;
  p.basis_size = 40;
  p.precision = Precision{512};
  p.safety = 1.5;
  return p;
}

constexpr RateWindow kClusterWindow{20, 40};

const GammaSweep& disk_sweep(Cache& cache) {
  if (!cache.disk_sweep)
    cache.disk_sweep = std::make_unique<GammaSweep>(gamma_sweep(main_problem(disk()), {5.0, 10.0}, kClusterWindow));
  return *cache.disk_sweep;
}

// --- criteria ---

void kernel_singularity(CriterionResult& r, Cache&) {
  r.title = "kernel diagonal singularity";
  std::vector<double> radii;
  for (int k = 0; k <= 24; ++k) radii.push_back(std::pow(10.0, -6.0 + 4.0 * k / 24.0));
  for (double b : {0.5, 1.0, 2.0}) {
    DiagonalFit f = diagonal_fit(b, {0.3, -0.2}, {std::cos(0.4), std::sin(0.4)}, radii, 1e-8);
    r.checks.push_back(within("slope b=" + plain(b), f.slope, 1.0 / (2.0 * kPi), 0.01));
  }
}

void kernel_cross(CriterionResult& r, Cache&) {
  r.title = "kernel cross-validation and decay";
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  int count = 0;
  for (double b : {0.5, 1.0, 2.0}) {
    for (int k = 0; k < 7 && count < 20; ++k, ++count) {
      double sep = 0.5 + 2.5 * u(rng), a = 2 * kPi * u(rng);
      Point y{2 * u(rng) - 1, 2 * u(rng) - 1};
      Point x{y.x + sep * std::cos(a), y.y + sep * std::sin(a)};
      auto s = g0_series<double>(b, x, y, 20000, 2e-9);
      worst = std::max(worst, abs(s.value - g0_integral<double>(b, x, y).value));
    }
  }
  r.checks.push_back(below("max |integral - series| over 20 pairs", worst, 1e-8));
  // |G0| at rho = 18 is e^{-9} / (4 sqrt(18 pi)) to leading order, about 4e-6
  double v = abs(g0_integral<double>(1.0, {6.0, 0.0}, {0.0, 0.0}).value);
  Check d = below("|G0| at r=6 b=1", v, 1e-6);
  d.unattainable = true;
  r.checks.push_back(d);
}

void boundary_structure(CriterionResult& r, Cache&) {
  r.title = "boundary operator A structure and jump";
  for (const auto& [name, c] : {std::pair{"disk", disk()}, std::pair{"ellipse", ellipse(1.5, 0.5)}}) {
    auto grid = build_grid<double>(c, 256);
    BoundaryMatrix a = assemble_A(grid, 1.0);
    auto ev = eigenvalues_A(a, grid);
    r.checks.push_back(below(std::string(name) + " asymmetry A", asymmetry(a, grid), 1e-10));
    r.checks.push_back(Check{std::string(name) + " min eigenvalue A", ev.back(), "> 0", ev.back() > 0.0});
    double slope = decay_exponent(ev, 4, 256 / 4);
    r.checks.push_back(Check{std::string(name) + " decay exponent", slope, "-1 +- 0.2", std::fabs(slope + 1.0) <= 0.2});
  }
  BoundaryDensity h = [](double t) { return std::complex<double>(std::cos(t) + 0.3, 0.0); };
  double prev = 1e300;
  bool monotone = true;
  for (int n : {64, 128, 256, 512}) {
    JumpReport j = check_jump_single_layer(disk(), n, 1.0, h, 10.0 / n);
    if (!(j.jump_error < prev)) monotone = false;
    prev = j.jump_error;
  }
  r.checks.push_back(truth("jump error decreasing N=64..512, final", monotone, prev));
}

void green_identity(CriterionResult& r, Cache&) {
  r.title = "Green identity residual";
  RobinFunction g5 = RobinFunction::uniform(5.0);
  auto density = [](const QuadGrid<double>& g) {
    std::vector<std::complex<double>> h(g.n);
    for (int k = 0; k < g.n; ++k) h[k] = std::cos(2.0 * g.theta[k]) + 0.3;
    return h;
  };
  const double floor = 1e-12;
  for (const auto& [name, c] : {std::pair{"disk", disk()}, std::pair{"ellipse", ellipse(1.5, 0.5)}}) {
    GreenReport res[2];
    int i = 0;
    for (int n : {128, 256}) {
      auto grid = build_grid<double>(c, n);
      auto [a, b] = assemble_AB(grid, 1.0);
      res[i++] = check_green_identity(a, b, grid, g5, density(grid));
    }
    const double hi = std::max(res[1].exterior, res[1].interior);
    if (std::string(name) == "disk") r.checks.push_back(below("disk residual N=256", hi, 1e-3));
    for (int side = 0; side < 2; ++side) {
      double a = side ? res[0].interior : res[0].exterior, b = side ? res[1].interior : res[1].exterior;
      bool ok = b <= 0.5 * a || std::max(a, b) < floor;
      r.checks.push_back(Check{std::string(name) + (side ? " interior" : " exterior") + " residual N=256", b,
                               "<= N=128 value " + sci(a) + " / 2, or both < 1e-12", ok});
    }
  }
}

void toeplitz_disk(CriterionResult& r, Cache&) {
  r.title = "Toeplitz rate on the disk";
  auto s1 = disk_spectrum(1, 2.0, 1.0, 60, Precision{512}, DiskChannel::closed_form);
  auto rho1 = rho_sequence(s1.eigenvalues);
  r.checks.push_back(within("n=1 raw rho_60", rho1[59].to_double(), 1.0, 0.10));
  r.checks.push_back(within("n=1 extrapolated [20,60]", extrapolate(rho1, {20, 60}).limit, 1.0, 0.02));
  auto s2 = disk_spectrum(2, 2.0, 1.0, 60, Precision{512}, DiskChannel::radial);
  auto rho2 = rho_sequence(s2.eigenvalues);
  r.checks.push_back(within("n=2 extrapolated [20,60]", extrapolate(rho2, {20, 60}).limit, 1.0, 0.03));
}

void toeplitz_ellipse(CriterionResult& r, Cache&) {
  r.title = "Toeplitz rate on the ellipse (Galerkin)";
  GalerkinOptions o;
  o.stable_count = 30;
  auto s = galerkin_spectrum(1, 1.0, ellipse(1.5, 0.5), 50, Precision{512}, o);
  auto rho = rho_sequence(s.eigenvalues);
  r.checks.push_back(within("extrapolated [10,30]", extrapolate(rho, {10, 30}).limit, 0.5, 0.05));
}

void capacity_suite(CriterionResult& r, Cache&) {
  r.title = "capacity";
  r.checks.push_back(Check{"disk analytic", capacity_analytic(disk().descriptor()).value, "== 1",
                           capacity_analytic(disk().descriptor()).value == 1.0});
  auto e = capacity_fekete(ellipse(1.5, 0.5), 200);
  r.checks.push_back(Check{"ellipse(1.5,0.5) Fekete M=200", e.value, "1 within 1e-3", std::fabs(e.value - 1.0) < 1e-3});
  auto thin = capacity_fekete(ellipse(1.0, 0.05), 200);
  r.checks.push_back(within("ellipse(1,0.05) vs 0.5(1+0.05)", thin.value, 0.525, 0.05));

  FeketeOptions quick;
  quick.estimate_error = false;
  double worst = 0.0;
  for (const Curve& c : {ellipse(1.5, 0.5), star(1.0, 0.2, 3)}) {
    double base = capacity_fekete(c, 100, quick).value;
    for (double lambda : {0.5, 2.0})
      worst = std::max(worst, std::fabs(capacity_fekete(c.scaled(lambda), 100, quick).value / (lambda * base) - 1.0));
  }
  r.checks.push_back(below("scaling max relative deviation", worst, 1e-10));

  auto cap = [&quick](const Curve& c) { return capacity_fekete(c, 100, quick).value; };
  bool ordered = cap(disk(0.5)) < cap(ellipse(1.5, 0.5)) && cap(ellipse(1.5, 0.5)) < cap(disk(1.5)) &&
                 cap(disk(0.8)) < cap(star(1.0, 0.2, 3)) && cap(star(1.0, 0.2, 3)) < cap(disk(1.2)) &&
                 cap(ellipse(1.0, 0.05)) < cap(ellipse(1.0, 0.3)) &&
                 capacity_fekete_segment(2.0, 100, quick).value < cap(ellipse(1.0, 0.05));
  r.checks.push_back(truth("inclusion monotonicity", ordered));
}

void cluster_rate(CriterionResult& r, Cache& cache) {
  r.title = "cluster rate on the disk, gamma = 5";
  const GammaSweep& g = disk_sweep(cache);
  const ClusterSpectrum& s = g.spectra[0];
  r.checks.push_back(Check{"gamma / (safety c0)", 5.0 / (1.5 * s.c0), "> 1", 5.0 > 1.5 * s.c0});
  r.checks.push_back(within("extrapolated [20,40]", g.rates[0].limit, 0.5, 0.10));
}

void gamma_independence(CriterionResult& r, Cache& cache) {
  r.title = "rate independent of gamma (5 vs 10)";
  const GammaSweep& g = disk_sweep(cache);
  r.checks.push_back(below("relative spread of limits", g.rate_spread, 0.03));
}

void sandwich(CriterionResult& r, Cache& cache) {
  r.title = "sandwich between inscribed and circumscribed disks";
  if (!cache.ellipse)
    cache.ellipse = std::make_unique<ClusterSpectrum>(cluster_spectrum(main_problem(ellipse(1.5, 0.5))));
  const auto& t = cache.ellipse->t;
  const int count = static_cast<int>(t.size());
  auto inner = disk_spectrum(1, 1.0, 0.4, count, Precision{512});
  auto outer = disk_spectrum(1, 1.0, 1.6, count, Precision{512});
  SandwichReport ok = sandwich_check(t, inner, outer);
  r.checks.push_back(truth("bounds hold for all j, violations", ok.holds() && std::isfinite(ok.c0) && std::isfinite(ok.c1),
                           static_cast<double>(ok.violations.size())));
  SandwichReport swapped = sandwich_check(t, outer, inner);
  r.checks.push_back(truth("swapped bounds rejected, violations", !swapped.holds(),
                           static_cast<double>(swapped.violations.size())));
}

void positivity(CriterionResult& r, Cache& cache) {
  r.title = "positivity of T_n";
  const ClusterSpectrum& s = disk_sweep(cache).spectra[0];
  bool nonneg = true;
  for (const auto& v : s.t) nonneg = nonneg && v.sign() >= 0;
  r.checks.push_back(truth("all t_j >= 0", nonneg, static_cast<double>(s.t.size())));
  r.checks.push_back(Check{"clamp count", static_cast<double>(s.clamped), "== 0", s.clamped == 0});
  // converged: refinement moves the leading values by little
  ClusterProblem fine = main_problem(disk());
  fine.grid_size = 512;
  fine.basis_size = 50;
  ClusterSpectrum f = cluster_spectrum(fine);
  double worst = 0.0;
  for (int j = 0; j < 10; ++j) worst = std::max(worst, (abs(BigReal(f.t[j] - s.t[j])) / f.t[j]).to_double());
  r.checks.push_back(below("top-10 change at N=512 M=50", worst, 1e-4));
  r.checks.push_back(Check{"clamp count at N=512 M=50", static_cast<double>(f.clamped), "== 0", f.clamped == 0});
}

void numerics(CriterionResult& r, Cache&) {
  r.title = "numerics substrate at 256 bits";
  const Precision p{256};
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::size_t n = 100;
  std::vector<BigComplex> f(n * n, BigComplex{BigReal(p), BigReal(p)});
  for (std::size_t i = 0; i < n; ++i) {
    f[i * n + i] = BigComplex{BigReal(u(rng), p), BigReal(p)};
    for (std::size_t j = i + 1; j < n; ++j) {
      f[i * n + j] = BigComplex{BigReal(u(rng), p), BigReal(u(rng), p)};
      f[j * n + i] = conj(f[i * n + j]);
    }
  }
  auto hermitian = [&](const std::vector<BigComplex>& g) {
    HermitianMatrix<BigReal> m(n, p);
    for (std::size_t i = 0; i < n; ++i) {
      m.set_diagonal(i, g[i * n + i].re);
      for (std::size_t j = i + 1; j < n; ++j) m.set(i, j, g[i * n + j]);
    }
    return m;
  };
  auto m = hermitian(f);
  auto s = hermitian_eigenvalues(m);
  BigReal sum(p);
  for (const auto& v : s.values) sum += v;
  r.checks.push_back(below("trace relative error", (abs(BigReal(sum - m.trace())) / m.frobenius_norm()).to_double(), 1e-60));

  // G^H M G for random complex Givens rotations
  std::uniform_real_distribution<double> ang(0.0, 2 * kPi);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (int k = 0; k < 300; ++k) {
    std::size_t a = pick(rng), b = pick(rng);
    if (a == b) continue;
    const BigReal theta(ang(rng), p);
    BigReal c = cos(theta), sn = sin(theta);
    BigComplex e = polar(BigReal(1.0, p), BigReal(ang(rng), p));
    BigComplex gaa{c, BigReal(p)}, gab = e * sn, gba = conj(e) * (-sn), gbb{c, BigReal(p)};
    for (std::size_t i = 0; i < n; ++i) {
      BigComplex x = f[i * n + a], y = f[i * n + b];
      f[i * n + a] = x * gaa + y * gba;
      f[i * n + b] = x * gab + y * gbb;
    }
    for (std::size_t i = 0; i < n; ++i) {
      BigComplex x = f[a * n + i], y = f[b * n + i];
      f[a * n + i] = conj(gaa) * x + conj(gba) * y;
      f[b * n + i] = conj(gab) * x + conj(gbb) * y;
    }
  }
  auto s2 = hermitian_eigenvalues(hermitian(f));
  double sim = 0.0;
  const BigReal scale = m.frobenius_norm();
  for (std::size_t i = 0; i < n; ++i) sim = std::max(sim, (abs(BigReal(s2.values[i] - s.values[i])) / scale).to_double());
  r.checks.push_back(below("similarity max eigenvalue change", sim, 1e-60));

  double lg = 0.0;
  std::uniform_real_distribution<double> ux(0.5, 50.0);
  for (int i = 0; i < 40; ++i) {
    BigReal x(ux(rng), p);
    BigReal lhs = log_gamma(BigReal(x + 1.0)), rhs = log_gamma(x) + log(x);
    lg = std::max(lg, (abs(BigReal(lhs - rhs)) / max(abs(rhs), BigReal(1.0, p))).to_double());
  }
  r.checks.push_back(below("log-gamma recurrence", lg, 1e-40));

  double ibp = 0.0;
  for (double a : {0.5, 1.0, 2.0, 7.5, 30.0, 61.0})
    for (double x : {0.01, 0.7, 3.0, 12.0, 45.0, 90.0}) {
      BigReal ba(a, p), bx(x, p);
      BigReal next = lower_incomplete_gamma(BigReal(ba + 1.0), bx);
      BigReal rhs = ba * lower_incomplete_gamma(ba, bx) - exp(ba * log(bx) - bx);
      ibp = std::max(ibp, (abs(BigReal(next - rhs)) / abs(next)).to_double());
    }
  r.checks.push_back(below("incomplete-gamma integration by parts", ibp, 1e-40));
}

using Runner = void (*)(CriterionResult&, Cache&);

const std::map<int, Runner>& runners() {
  static const std::map<int, Runner> m{{1, kernel_singularity}, {2, kernel_cross},     {3, boundary_structure},
                                       {4, green_identity},     {5, toeplitz_disk},    {6, toeplitz_ellipse},
                                       {7, capacity_suite},     {8, cluster_rate},     {9, gamma_independence},
                                       {10, sandwich},          {11, positivity},      {12, numerics}};
  return m;
}

}  // namespace

std::vector<int> suite_criteria(const std::string& suite) {
  if (suite == "kernel") return {1, 2, 12};
  if (suite == "boundary") return {3, 4};
  if (suite == "toeplitz") return {5, 6, 7};
  if (suite == "cluster") return {8, 9, 10, 11};
  if (suite == "full") return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
  throw ConfigError({"suite: expected kernel, boundary, toeplitz, cluster or full, got '" + suite + "'"});
}

VerifyReport verify(const std::string& suite, const std::function<void(const CriterionResult&)>& on_result) {
  VerifyReport report{suite, {}};
  Cache cache;
  for (int id : suite_criteria(suite)) {
    CriterionResult r;
    r.id = id;
    auto start = std::chrono::steady_clock::now();
    try {
      runners().at(id)(r, cache);
    } catch (const std::exception& e) {
      r.error = e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (on_result) on_result(r);
    report.criteria.push_back(std::move(r));
  }
  return report;
}

std::string format_line(const CriterionResult& r) {
  std::string status = r.passed() ? "PASS" : (r.blocking() ? "FAIL" : "FAIL (unattainable target)");
  char id[8];
  std::snprintf(id, sizeof id, "%2d", r.id);
  std::string line = status + "  " + id + "  " + r.title + ":";
  if (!r.error.empty()) line += " error: " + r.error + ";";
  for (const auto& c : r.checks) {
    line += " " + c.label + " " + sci(c.measured, 4) + " (" + c.target + ", " + (c.passed ? "ok" : "fail") +
            (c.unattainable && !c.passed ? ", unattainable" : "") + ");";
  }
  char t[32];
  std::snprintf(t, sizeof t, " [%.1f s]", r.seconds);
  return line + t;
}

}  // namespace magspec
