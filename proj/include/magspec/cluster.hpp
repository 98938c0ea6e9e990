#pragma once

#include <vector>

#include "magspec/boundary_ops.hpp"
#include "magspec/numerics/hermitian.hpp"
#include "magspec/rates.hpp"

namespace magspec {

struct ClusterProblem {
  Curve curve;
  double b = 1.0;
  int n = 1;
  RobinFunction gamma = RobinFunction::uniform(5.0);
  int basis_size = 40;   // M
  int grid_size = 256;   // N
  Precision precision{512};
  double safety = 1.0;
  // Limit on the scaled asymmetry; above it the run is reported as under-resolved.
  double asymmetry_tolerance = 1e-6;

  explicit ClusterProblem(Curve c) : curve(std::move(c)) {}
};

// Matrix of T_n in the basis psi_{n,0..M-1} centered at the curve center, Hermitized.
struct TnMatrix {
  HermitianMatrix<BigReal> matrix;
  // max_ij |H_ij - conj(H_ji)| / sqrt(H_ii H_jj) before Hermitization
  double asymmetry = 0.0;
  // off-diagonal over diagonal Frobenius mass of the unit-diagonal form of H
  double offdiagonal_ratio = 0.0;
  double c0 = 0.0;
  double norm_b = 0.0;

  TnMatrix(std::size_t m, Precision p) : matrix(m, p) {}
};

// <psi_i, T_n psi_j> = Lambda_n^{-2} sum_k w_k psi_i(x_k) conj((T psi_j)(x_k)) with
// T = T_{B,-} A^{-1} T_{B,+}^{-1}. HypothesisError when min |gamma| <= safety c0,
// ConvergenceError when the asymmetry exceeds the tolerance or a diagonal entry is not positive.
TnMatrix assemble_Tn(const ClusterProblem& p);

struct ClusterSpectrum {
  std::vector<BigReal> t;    // retained eigenvalues, descending, positive
  std::vector<BigReal> ell;  // 1 / (Lambda_n^{-1} + t_j), increasing toward Lambda_n
  double landau_level = 0.0;
  int clamped = 0;           // tiny negative values set to zero and dropped
  double clamp_tolerance = 0.0;  // relative to t_1
  int basis_size = 0;
  int grid_size = 0;
  unsigned bits = 0;
  double asymmetry = 0.0;
  double offdiagonal_ratio = 0.0;
  double c0 = 0.0;
  int sweeps = 0;
};

// Eigenvalues of assemble_Tn by the Jacobi solver, which keeps relative accuracy on
// graded matrices. Values in [-10^{-bits/8} t_1, 0] are clamped; lower ones throw NumericError.
ClusterSpectrum cluster_spectrum(const ClusterProblem& p);
ClusterSpectrum cluster_spectrum(const ClusterProblem& p, const TnMatrix& h);

struct GammaSweep {
  std::vector<double> gammas;  // constants of the Robin coefficients
  std::vector<ClusterSpectrum> spectra;
  std::vector<RateEstimate> rates;
  double rate_spread = 0.0;    // (max L - min L) / mean L
  // sign of ell_j(gamma_{k+1}) - ell_j(gamma_k) when every j and k agree, else 0
  int direction = 0;
  bool consistent = true;
  RateWindow window;
};

// One run per constant gamma, sharing A and B. A single gamma reduces to cluster_spectrum
// plus its rate.
GammaSweep gamma_sweep(const ClusterProblem& p, const std::vector<double>& gammas, RateWindow window);

}  // namespace magspec
