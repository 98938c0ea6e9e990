#pragma once

#include <cstddef>
#include <vector>

#include "magspec/numerics/complex.hpp"

namespace magspec {

// Dense Hermitian matrix; only the upper triangle is stored.
template <class Real>
class HermitianMatrix {
 public:
  HermitianMatrix(std::size_t n, Precision p);

  // Row-major full matrix; throws DomainError unless it is exactly Hermitian.
  static HermitianMatrix from_full(std::size_t n, const std::vector<Complex<Real>>& entries);

  std::size_t dimension() const { return n_; }
  Precision precision() const { return prec_; }

  // Entry (i, j); the lower triangle is derived by conjugation.
  Complex<Real> operator()(std::size_t i, std::size_t j) const;
  // Sets (i, j) for i <= j; the diagonal must be real.
  void set(std::size_t i, std::size_t j, const Complex<Real>& v);
  void set_diagonal(std::size_t i, const Real& v);

  Real frobenius_norm() const;
  Real trace() const;

  const std::vector<Real>& re() const { return re_; }
  const std::vector<Real>& im() const { return im_; }
  std::size_t index(std::size_t i, std::size_t j) const { return i * n_ - i * (i + 1) / 2 + j; }

 private:
  std::size_t n_;
  Precision prec_;
  std::vector<Real> re_;
  std::vector<Real> im_;
};

// Eigenvalues sorted descending with solver metadata.
template <class Real>
struct Spectrum {
  std::vector<Real> values;
  Precision precision;
  int sweeps = 0;
  // Final off-diagonal Frobenius norm relative to the input Frobenius norm.
  double off_ratio = 0.0;
};

struct JacobiOptions {
  int max_sweeps = 60;
};

// Cyclic Jacobi with complex rotations. Stops when the off-diagonal Frobenius
// norm drops below 2^-(bits-16) of the input norm; ConvergenceError at the sweep cap.
template <class Real>
Spectrum<Real> hermitian_eigenvalues(const HermitianMatrix<Real>& m, JacobiOptions opts = {});

}  // namespace magspec
