#pragma once

#include <string>
#include <vector>

#include "magspec/geometry.hpp"
#include "magspec/numerics/bigreal.hpp"

namespace magspec {

enum class ToeplitzMethod { radial_exact, galerkin };
std::string to_string(ToeplitzMethod m);

// Eigenvalues of S = P_n chi_U P_n, descending.
struct ToeplitzSpectrum {
  int n = 1;
  double b = 1.0;
  ShapeDescriptor domain;
  std::vector<BigReal> eigenvalues;
  int truncation = 0;        // angular sectors (disk) or basis size (Galerkin)
  ToeplitzMethod method = ToeplitzMethod::radial_exact;
  double error = 0.0;        // max relative change under refinement of the leading values
  Precision precision{kDefaultBits};
};

// How disk_spectrum evaluates s_m = int_{|z|<R} |psi_{n,m}|^2.
enum class DiskChannel {
  automatic,     // closed form for n = 1, radial quadrature otherwise
  closed_form,   // gamma(m+1, bR^2/2) / m!, level 1 only
  radial,        // Gauss-Legendre in x = b r^2 / 2 over the basis functions
};

// Bits needed so that s_J / s_1 keeps 64 significant bits: ceil(-log2(s_J/s_1)) + 64.
unsigned required_bits(const std::vector<BigReal>& descending);

// Top `count` eigenvalues of the centered disk of radius R, one per angular sector.
// Throws PrecisionError naming the required bits when the working precision is too small.
ToeplitzSpectrum disk_spectrum(int n, double b, double radius, int count, Precision p,
                               DiskChannel channel = DiskChannel::automatic);

struct GalerkinOptions {
  int angular_nodes = 0;        // trapezoid nodes in the curve parameter; 0 selects 4M + 64
  bool check_stability = true;  // repeat with 2M (and doubled angular nodes)
  int stable_count = 0;         // leading eigenvalues kept and checked; 0 selects max(1, M - 20)
  double stability_tolerance = 1e-6;
  double bound_tolerance = 1e-8;  // eigenvalues must lie in [-delta, 1 + delta]
};

// Galerkin matrix int_U conj(psi_{n,i}) psi_{n,j} over i, j < M, with the basis centered at
// the curve center. Polar map x = c + s Z(t), s in [0, 1], with the s integral done exactly
// through lower incomplete gamma functions and the trapezoid rule in t. Returns the
// leading stable_count eigenvalues.
ToeplitzSpectrum galerkin_spectrum(int n, double b, const Curve& u, int basis_size, Precision p,
                                   GalerkinOptions opts = {});

struct SandwichReport {
  int count = 0;
  double c0 = 0.0;                // max_j (ln s0_j - ln t_j) over the fit half
  double c1 = 0.0;                // max_j (ln t_j - ln s1_j) over the fit half
  double c0_full = 0.0;           // same maxima over every index
  double c1_full = 0.0;
  std::vector<double> lower_gap;  // ln s0_j - ln t_j
  std::vector<double> upper_gap;  // ln t_j - ln s1_j
  std::vector<int> violations;    // 1-based indices breaking either bound
  bool holds() const { return violations.empty(); }
};

struct SandwichOptions {
  double slack = 1.0;  // allowed growth of either gap beyond its fitted constant, in log units
};

// Eigenvalue form of (1/C) S^{K0} <= T <= C S^{K1}: constants are fitted on the first half
// of the common index range and must hold, up to the slack, on the rest.
SandwichReport sandwich_check(const std::vector<BigReal>& t, const ToeplitzSpectrum& s0,
                              const ToeplitzSpectrum& s1, SandwichOptions opts = {});

}  // namespace magspec
