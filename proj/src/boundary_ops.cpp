#include "magspec/boundary_ops.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "magspec/landau.hpp"
#include "magspec/numerics/hermitian.hpp"

namespace magspec {

namespace {

constexpr double kPi = 3.14159265358979323846;
const std::complex<double> kI(0.0, 1.0);

// Periodic log weights R(2 pi k / N), k = 0..N-1.
std::vector<double> kress_weights(int n_nodes) {
  const int n = n_nodes / 2;
  std::vector<double> r(n_nodes);
  for (int k = 0; k < n_nodes; ++k) {
    double tau = 2.0 * kPi * k / n_nodes, s = 0.0;
    for (int m = 1; m < n; ++m) s += std::cos(m * tau) / m;
    r[k] = -(2.0 * kPi / n) * s - (kPi / (double(n) * n)) * std::cos(n * tau);
  }
  return r;
}

// ln(4 sin^2(pi k / N)), k = 1..N-1; entry 0 unused.
std::vector<double> log_weights(int n_nodes) {
  std::vector<double> l(n_nodes, 0.0);
  for (int k = 1; k < n_nodes; ++k) {
    double s = std::sin(kPi * k / n_nodes);
    l[k] = std::log(4.0 * s * s);
  }
  return l;
}

void check_grid(const QuadGrid<double>& grid, const char* where) {
  if (grid.n < 32) throw DomainError(std::string(where) + ": grid node count must be at least 32");
}

KernelProfile<double> checked_profile(double rho, const KernelQuadrature& q) {
  KernelProfile<double> p = g0_profile(rho, q);
  if (p.error > std::ldexp(1.0, -43) * std::fabs(p.g))
    throw ConvergenceError("boundary assembly: kernel quadrature did not converge", p.error);
  return p;
}

Eigen::VectorXcd to_vector(const std::vector<std::complex<double>>& v) {
  Eigen::VectorXcd out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out(i) = v[i];
  return out;
}

double l2_norm(const QuadGrid<double>& grid, const Eigen::VectorXcd& u) { return std::sqrt(inner(grid, u, u).real()); }

HermitianMatrix<double> hermitian_part(const Eigen::MatrixXcd& s) {
  const auto n = static_cast<std::size_t>(s.rows());
  HermitianMatrix<double> h(n, {53});
  for (std::size_t i = 0; i < n; ++i) {
    h.set_diagonal(i, s(i, i).real());
    for (std::size_t j = i + 1; j < n; ++j) {
      std::complex<double> v = 0.5 * (s(i, j) + std::conj(s(j, i)));
      h.set(i, j, {v.real(), v.imag()});
    }
  }
  return h;
}

}  // namespace

std::string to_string(OperatorKind k) {
  switch (k) {
    case OperatorKind::A:
      return "A";
    case OperatorKind::B:
      return "B";
    case OperatorKind::B_adjoint:
      return "B_adjoint";
    case OperatorKind::T_plus:
      return "T_plus";
    case OperatorKind::T_minus:
      return "T_minus";
    case OperatorKind::T:
      return "T";
  }
  return "unknown";
}

std::pair<BoundaryMatrix, BoundaryMatrix> assemble_AB(const QuadGrid<double>& grid, double b) {
  check_grid(grid, "assemble");
  b = MagneticField(b).b;
  const int n = grid.n;
  const std::vector<double> r = kress_weights(n), l4 = log_weights(n);
  const double h = 2.0 * kPi / n, c = 1.0 / (4.0 * kPi);
  const double intercept = diagonal_fit(b, grid.points[0], grid.normals[0], default_fit_radii()).intercept;
  const KernelQuadrature q{};

  BoundaryMatrix a{OperatorKind::A, b, n, Eigen::MatrixXcd(n, n), 0.0, intercept};
  BoundaryMatrix bm{OperatorKind::B, b, n, Eigen::MatrixXcd(n, n), 0.0, intercept};
  double max_err = 0.0;

  for (int i = 0; i < n; ++i) {
    const Point xi = grid.points[i];
    const Point ni = grid.normals[i];
    const double si = grid.speeds[i];
    a.entries(i, i) = r[0] * (-c * si) + h * (intercept - c * std::log(si * si)) * si;
    bm.entries(i, i) = h * dot(ni, grid.second[i]) * c / si;
    for (int j = i + 1; j < n; ++j) {
      const Point xj = grid.points[j];
      const Point nj = grid.normals[j];
      const double sj = grid.speeds[j];
      const int k = ((i - j) % n + n) % n;
      const Point v = xi - xj;
      const double rho = 0.5 * b * dist2(xi, xj);
      KernelProfile<double> p = checked_profile(rho, q);
      max_err = std::max(max_err, p.error);
      const std::complex<double> ph = std::polar(1.0, -0.5 * b * wedge(xi, xj));
      const std::complex<double> phc = std::conj(ph);
      const double i0 = std::cyl_bessel_i(0.0, 0.5 * rho), i1 = std::cyl_bessel_i(1.0, 0.5 * rho);

      // single layer, both orientations
      std::complex<double> k1 = -c * i0 * ph * sj;
      a.entries(i, j) = r[k] * k1 + h * (ph * p.g * sj - k1 * l4[k]);
      k1 = -c * i0 * phc * si;
      a.entries(j, i) = r[k] * k1 + h * (phc * p.g * si - k1 * l4[k]);

      // normal derivative at y = x_j for target x_i: nu_j . (x_j - x_i), nu_j . J(x_i - x_j)
      double d = -dot(nj, v), nJ = nj.x * v.y - nj.y * v.x;
      std::complex<double> kern = ph * (p.dg * b * d + kI * (0.5 * b) * p.g * nJ);
      k1 = ph * (-c) * (0.5 * i1 * b * d + kI * (0.5 * b) * i0 * nJ) * sj;
      bm.entries(i, j) = r[k] * k1 + h * (kern * sj - k1 * l4[k]);
      // y = x_i for target x_j
      d = dot(ni, v);
      nJ = -(ni.x * v.y - ni.y * v.x);
      kern = phc * (p.dg * b * d + kI * (0.5 * b) * p.g * nJ);
      k1 = phc * (-c) * (0.5 * i1 * b * d + kI * (0.5 * b) * i0 * nJ) * si;
      bm.entries(j, i) = r[k] * k1 + h * (kern * si - k1 * l4[k]);
    }
  }
  a.kernel_error = bm.kernel_error = max_err;
  return {std::move(a), std::move(bm)};
}

BoundaryMatrix assemble_A(const QuadGrid<double>& grid, double b) { return assemble_AB(grid, b).first; }
BoundaryMatrix assemble_B(const QuadGrid<double>& grid, double b) { return assemble_AB(grid, b).second; }

BoundaryMatrix adjoint(const BoundaryMatrix& m, const QuadGrid<double>& grid) {
  BoundaryMatrix out = m;
  out.kind = m.kind == OperatorKind::B ? OperatorKind::B_adjoint : m.kind;
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) out.entries(i, j) = std::conj(m.entries(j, i)) * grid.weights[j] / grid.weights[i];
  return out;
}

Eigen::MatrixXcd symmetrized(const BoundaryMatrix& m, const QuadGrid<double>& grid) {
  Eigen::MatrixXcd s = m.entries;
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) s(i, j) *= std::sqrt(grid.weights[i] / grid.weights[j]);
  return s;
}

double asymmetry(const BoundaryMatrix& m, const QuadGrid<double>& grid) {
  Eigen::MatrixXcd s = symmetrized(m, grid);
  Eigen::MatrixXcd d = s - s.adjoint();
  return d.cwiseAbs().maxCoeff() / s.cwiseAbs().maxCoeff();
}

std::vector<double> eigenvalues_A(const BoundaryMatrix& a, const QuadGrid<double>& grid) {
  return hermitian_eigenvalues(hermitian_part(symmetrized(a, grid))).values;
}

std::vector<double> singular_values(const BoundaryMatrix& m, const QuadGrid<double>& grid) {
  Eigen::MatrixXcd s = symmetrized(m, grid);
  Eigen::MatrixXcd g = s.adjoint() * s;
  std::vector<double> ev = hermitian_eigenvalues(hermitian_part(g)).values;
  for (double& v : ev) v = std::sqrt(std::max(v, 0.0));
  return ev;
}

double decay_exponent(const std::vector<double>& values, int k_min, int k_max) {
  if (k_min < 1 || k_max > static_cast<int>(values.size()) || k_max - k_min < 2)
    throw DomainError("decay_exponent: invalid index range");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int m = k_max - k_min + 1;
  for (int k = k_min; k <= k_max; ++k) {
    if (!(values[k - 1] > 0.0)) throw DomainError("decay_exponent: non-positive value");
    double x = std::log(double(k)), y = std::log(values[k - 1]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

RobinThreshold robin_threshold(const BoundaryMatrix& b, const QuadGrid<double>& grid) {
  double norm = singular_values(b, grid).front();
  return {norm + 1.0, norm};
}

std::vector<double> robin_values(const RobinFunction& gamma, const QuadGrid<double>& grid) {
  std::vector<double> g(grid.n);
  for (int i = 0; i < grid.n; ++i) g[i] = gamma(grid.theta[i]);
  return g;
}

TOperator build_T(const BoundaryMatrix& a, const BoundaryMatrix& b, const QuadGrid<double>& grid,
                  const RobinFunction& gamma, const RobinThreshold& c0, double safety) {
  if (a.n != grid.n || b.n != grid.n) throw DomainError("build_T: operator and grid sizes differ");
  if (!(safety >= 1.0)) throw DomainError("build_T: safety factor must be at least 1");
  const std::vector<double> g = robin_values(gamma, grid);
  const double bound = safety * c0.c0;
  for (int i = 0; i < grid.n; ++i) {
    if (!(std::fabs(g[i]) > bound)) {
      std::ostringstream os;
      os << "build_T: min |gamma| > C0 violated at node " << i << " (theta = " << grid.theta[i]
         << "): |gamma| = " << std::fabs(g[i]) << " <= " << bound;
      throw HypothesisError(os.str());
    }
  }
  const int n = grid.n;
  TOperator out{b, b, adjoint(b, grid), 0.0, 0.0, 0.0};
  out.t_plus.kind = OperatorKind::T_plus;
  out.t_minus.kind = OperatorKind::T_minus;
  out.t.kind = OperatorKind::T;
  for (int i = 0; i < n; ++i) {
    out.t_plus.entries(i, i) += g[i] + 0.5;
    out.t_minus.entries(i, i) += g[i] - 0.5;
  }
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu_a(a.entries), lu_p(out.t_plus.entries), lu_m(out.t_minus.entries);
  out.rcond_a = lu_a.rcond();
  out.rcond_plus = lu_p.rcond();
  out.rcond_minus = lu_m.rcond();
  if (!(out.rcond_a > 1e-13)) throw NumericError("build_T: A is numerically singular");
  if (!(out.rcond_plus > 1e-13) || !(out.rcond_minus > 1e-13))
    throw NumericError("build_T: B + (gamma +- 1/2) I is numerically singular");
  out.t.entries = out.t_minus.entries * lu_a.solve(lu_p.inverse());
  out.t.kernel_error = std::max(a.kernel_error, b.kernel_error);
  return out;
}

JumpReport check_jump_single_layer(const Curve& curve, int n, double b, const BoundaryDensity& h, double epsilon,
                                   int upsample) {
  b = MagneticField(b).b;
  if (upsample < 1) throw DomainError("check_jump_single_layer: upsample must be positive");
  QuadGrid<double> grid = build_grid<double>(curve, n);
  QuadGrid<double> fine = build_grid<double>(curve, n * upsample);
  double spacing = *std::max_element(fine.weights.begin(), fine.weights.end());
  if (!(epsilon >= 2.0 * spacing))
    throw DomainError("check_jump_single_layer: offset too small relative to the quadrature spacing");
  if (!(epsilon < 0.5 * curve.min_radius())) throw DomainError("check_jump_single_layer: offset too large");

  std::vector<std::complex<double>> wh(fine.n);
  for (int k = 0; k < fine.n; ++k) wh[k] = fine.weights[k] * h(fine.theta[k]);
  const KernelQuadrature q{0, 0.0, false};

  struct Field {
    std::complex<double> u, dn;
  };
  auto evaluate = [&](Point x, Point nu) {
    Field f{0.0, 0.0};
    for (int k = 0; k < fine.n; ++k) {
      const Point y = fine.points[k];
      const Point v = x - y;
      KernelProfile<double> p = g0_profile(0.5 * b * dist2(x, y), q);
      const std::complex<double> ph = std::polar(1.0, -0.5 * b * wedge(x, y));
      // nu . (grad_x - i b A0(x)) G0 = e^{i phi} [g' b nu.v - i (b/2) g nu.(-v2, v1)]
      std::complex<double> d = ph * (p.dg * b * dot(nu, v) - kI * (0.5 * b) * p.g * (-nu.x * v.y + nu.y * v.x));
      f.u += ph * p.g * wh[k];
      f.dn += d * wh[k];
    }
    return f;
  };

  JumpReport rep{epsilon, 0.0, 0.0, upsample};
  for (int i = 0; i < grid.n; ++i) {
    const Point x = grid.points[i], nu = grid.normals[i];
    Field omega = evaluate({x.x - epsilon * nu.x, x.y - epsilon * nu.y}, nu);
    Field k_side = evaluate({x.x + epsilon * nu.x, x.y + epsilon * nu.y}, nu);
    rep.jump_error = std::max(rep.jump_error, std::abs(omega.dn - k_side.dn - h(grid.theta[i])));
    rep.continuity = std::max(rep.continuity, std::abs(omega.u - k_side.u));
  }
  return rep;
}

GreenReport check_green_identity(const BoundaryMatrix& a, const BoundaryMatrix& b, const QuadGrid<double>& grid,
                                 const RobinFunction& gamma, const std::vector<std::complex<double>>& h) {
  if (static_cast<int>(h.size()) != grid.n) throw DomainError("check_green_identity: density size mismatch");
  const Eigen::VectorXcd hv = to_vector(h);
  const std::vector<double> g = robin_values(gamma, grid);
  Eigen::VectorXd gv(grid.n);
  for (int i = 0; i < grid.n; ++i) gv(i) = g[i];
  const BoundaryMatrix bp = adjoint(b, grid);

  const Eigen::VectorXcd u = a.entries * hv;
  const Eigen::VectorXcd gu = gv.cwiseProduct(u);
  const Eigen::VectorXcd bu = b.entries * u;
  const Eigen::VectorXcd dn_omega = 0.5 * hv + bp.entries * hv;
  const Eigen::VectorXcd dn_k = -0.5 * hv + bp.entries * hv;
  const Eigen::VectorXcd a_omega = a.entries * (dn_omega + gu);
  const Eigen::VectorXcd a_k = a.entries * (dn_k + gu);
  const Eigen::VectorXcd agu = a.entries * gu;
  const double nu = l2_norm(grid, u);

  GreenReport rep;
  rep.exterior = l2_norm(grid, bu + 0.5 * u + agu - a_omega) / nu;
  rep.interior = l2_norm(grid, bu - 0.5 * u + agu - a_k) / nu;
  rep.literal_exterior = l2_norm(grid, bu + gu + 0.5 * u - a_omega) / nu;
  rep.literal_interior = l2_norm(grid, bu + gu - 0.5 * u - a_k) / nu;
  return rep;
}

std::complex<double> inner(const QuadGrid<double>& grid, const Eigen::VectorXcd& u, const Eigen::VectorXcd& v) {
  std::complex<double> s = 0.0;
  for (int k = 0; k < grid.n; ++k) s += grid.weights[k] * u(k) * std::conj(v(k));
  return s;
}

RayleighReport rayleigh_bound(const BoundaryMatrix& t, const QuadGrid<double>& grid, int random_vectors) {
  const int n = grid.n;
  std::vector<Eigen::VectorXcd> tests;
  for (int m = 0; m <= n / 4; ++m) {
    Eigen::VectorXcd c(n), s(n);
    for (int k = 0; k < n; ++k) {
      c(k) = std::cos(m * grid.theta[k]);
      s(k) = std::sin(m * grid.theta[k]);
    }
    tests.push_back(c);
    if (m > 0) tests.push_back(s);
  }
  std::mt19937_64 rng(20240601);
  std::normal_distribution<double> normal;
  for (int r = 0; r < random_vectors; ++r) {
    Eigen::VectorXcd u(n);
    for (int k = 0; k < n; ++k) u(k) = normal(rng);
    tests.push_back(u);
  }

  auto h1_norm = [&](const Eigen::VectorXcd& u) {
    double acc = 0.0;
    for (int m = -n / 2 + 1; m <= n / 2; ++m) {
      std::complex<double> c = 0.0;
      for (int k = 0; k < n; ++k) c += u(k) * std::polar(1.0, -m * grid.theta[k]);
      c /= double(n);
      acc += (1.0 + double(m) * m) * std::norm(c);
    }
    return std::sqrt(2.0 * kPi * acc);
  };

  RayleighReport rep{std::numeric_limits<double>::infinity(), 0.0, 0.0, std::numeric_limits<double>::infinity(),
                     static_cast<int>(tests.size())};
  for (const auto& u : tests) {
    double form = inner(grid, t.entries * u, u).real();
    double l2 = l2_norm(grid, u);
    double ratio = form / (l2 * h1_norm(u));
    rep.min_ratio = std::min(rep.min_ratio, ratio);
    rep.max_ratio = std::max(rep.max_ratio, ratio);
    rep.min_form = std::min(rep.min_form, form / (l2 * l2));
  }
  rep.constant = rep.min_ratio > 0.0 ? std::max(rep.max_ratio, 1.0 / rep.min_ratio)
                                     : std::numeric_limits<double>::infinity();
  return rep;
}

}  // namespace magspec
