#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

#include "magspec/geometry.hpp"
#include "magspec/green_kernel.hpp"

namespace magspec {

enum class OperatorKind { A, B, B_adjoint, T_plus, T_minus, T };
std::string to_string(OperatorKind k);

// Nystrom matrix acting on nodal values: (M alpha)_i approximates (M alpha)(x_i).
struct BoundaryMatrix {
  OperatorKind kind = OperatorKind::A;
  double b = 1.0;
  int n = 0;
  Eigen::MatrixXcd entries;
  double kernel_error = 0.0;  // max per-pair profile quadrature estimate
  double intercept = 0.0;     // diagonal remainder constant from diagonal_fit (A, B)
};

// Kress splitting: A_ij = R_ij K1_ij + (2pi/N) K2_ij with the periodic log weights
//   R_ij = -(2pi/n) sum_{m=1}^{n-1} cos(m(t_i-t_j))/m - (pi/n^2) cos(n(t_i-t_j)), n = N/2.
// The log coefficient of G0 is -(1/4pi) I0(rho/2) ln rho, so K1 is exact and K2 smooth.
BoundaryMatrix assemble_A(const QuadGrid<double>& grid, double b);
// Kernel nu_y . (grad_y + i b A0(y)) G0(x, y), same splitting.
BoundaryMatrix assemble_B(const QuadGrid<double>& grid, double b);
// Both from one pass over node pairs.
std::pair<BoundaryMatrix, BoundaryMatrix> assemble_AB(const QuadGrid<double>& grid, double b);

// L2(Gamma) adjoint W^{-1} B^H W: the normal-derivative-in-x operator of the single layer.
BoundaryMatrix adjoint(const BoundaryMatrix& m, const QuadGrid<double>& grid);

// W^{1/2} M W^{-1/2}, the matrix of M in an orthonormal nodal basis of L2(Gamma).
Eigen::MatrixXcd symmetrized(const BoundaryMatrix& m, const QuadGrid<double>& grid);
// max |S - S^H| / max |S| for S = symmetrized(m).
double asymmetry(const BoundaryMatrix& m, const QuadGrid<double>& grid);

// Descending eigenvalues of the Hermitian part of symmetrized(A).
std::vector<double> eigenvalues_A(const BoundaryMatrix& a, const QuadGrid<double>& grid);
// Descending singular values of symmetrized(m), from the Hermitian eigensolver on S^H S.
std::vector<double> singular_values(const BoundaryMatrix& m, const QuadGrid<double>& grid);

// Least-squares slope of ln(lambda_k) against ln(k) over k in [k_min, k_max] (1-based).
double decay_exponent(const std::vector<double>& values, int k_min, int k_max);

struct RobinThreshold {
  double c0 = 1.0;      // ||B||_2 + 1
  double norm_b = 0.0;
};
RobinThreshold robin_threshold(const BoundaryMatrix& b, const QuadGrid<double>& grid);

// Robin coefficient values at the grid nodes.
std::vector<double> robin_values(const RobinFunction& gamma, const QuadGrid<double>& grid);

struct TOperator {
  BoundaryMatrix t;
  BoundaryMatrix t_plus;
  BoundaryMatrix t_minus;
  double rcond_a = 0.0;     // reciprocal condition estimates of the factored matrices
  double rcond_plus = 0.0;
  double rcond_minus = 0.0;
};

// T = T_{B,-} A^{-1} T_{B,+}^{-1} with T_{B,+} = B + (gamma + 1/2) I and
// T_{B,-} = B' + (gamma - 1/2) I, B' the L2(Gamma) adjoint of B. By A B' = B A this is
// (B' + gamma - 1/2)(B' + gamma + 1/2)^{-1} A^{-1}, self-adjoint for any gamma.
// Requires min |gamma| > safety * c0 at every node (HypothesisError names the first violation).
TOperator build_T(const BoundaryMatrix& a, const BoundaryMatrix& b, const QuadGrid<double>& grid,
                  const RobinFunction& gamma, const RobinThreshold& c0, double safety = 1.0);

using BoundaryDensity = std::function<std::complex<double>(double theta)>;

struct JumpReport {
  double epsilon = 0.0;
  double jump_error = 0.0;  // max_i |d_N(Ah)(x_i - eps nu) - d_N(Ah)(x_i + eps nu) - h(x_i)|
  double continuity = 0.0;  // max_i |(Ah)(x_i + eps nu) - (Ah)(x_i - eps nu)|
  int upsample = 0;
};

// Off-surface evaluation of the single layer at x_i +- eps nu_i (nu into K) with
// the trapezoid rule on an upsampled grid. The frozen sign convention: the Omega-side
// normal derivative minus the K-side one equals h.
JumpReport check_jump_single_layer(const Curve& curve, int n, double b, const BoundaryDensity& h,
                                   double epsilon, int upsample = 2);

struct GreenReport {
  double exterior = 0.0;          // ||(B + 1/2) u + A(gamma u) - A(d_Gamma u_Omega)|| / ||u||
  double interior = 0.0;          // same with (B - 1/2) and d_Gamma u_K
  double literal_exterior = 0.0;  // ||(B + gamma + 1/2) u - A(d_Gamma u_Omega)|| / ||u||
  double literal_interior = 0.0;
};

// Test field u = single layer of h: u = A h on Gamma, d_N u_Omega = h/2 + B' h,
// d_N u_K = -h/2 + B' h, d_Gamma = d_N + gamma. Norms are L2(Gamma).
GreenReport check_green_identity(const BoundaryMatrix& a, const BoundaryMatrix& b, const QuadGrid<double>& grid,
                                 const RobinFunction& gamma, const std::vector<std::complex<double>>& h);

struct RayleighReport {
  double min_ratio = 0.0;  // min <u, T_H u> / (||u|| ||u||_H1) over the test vectors
  double max_ratio = 0.0;
  double constant = 0.0;   // max(max_ratio, 1/min_ratio); infinite if min_ratio <= 0
  double min_form = 0.0;   // min <u, T_H u> / ||u||^2
  int vectors = 0;
};

// Two-sided bound of the Hermitian part of T against ||u|| ||u||_H1 (Fourier
// multipliers (1 + m^2)^{1/2} on the parameter circle). Test vectors: cos/sin
// modes up to N/4 and fixed-seed random real vectors.
RayleighReport rayleigh_bound(const BoundaryMatrix& t, const QuadGrid<double>& grid, int random_vectors = 8);

// L2(Gamma) inner product sum_k w_k u_k conj(v_k).
std::complex<double> inner(const QuadGrid<double>& grid, const Eigen::VectorXcd& u, const Eigen::VectorXcd& v);

}  // namespace magspec
