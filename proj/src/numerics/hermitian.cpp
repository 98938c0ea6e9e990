#include "magspec/numerics/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace magspec {

namespace {

inline void assign(double& d, double s) { d = s; }
inline void assign_neg(double& d, double s) { d = -s; }
inline void assign(BigReal& d, const BigReal& s) { mpfr_set(d.raw(), s.raw(), MPFR_RNDN); }
inline void assign_neg(BigReal& d, const BigReal& s) { mpfr_neg(d.raw(), s.raw(), MPFR_RNDN); }

template <class Real>
Real off_norm2(const std::vector<Real>& re, const std::vector<Real>& im, std::size_t n,
               Precision p) {
  Real acc = make_real<Real>(0.0, p);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    ++k;  // diagonal
    for (std::size_t j = i + 1; j < n; ++j, ++k) {
      set_fma(acc, re[k], re[k], acc);
      set_fma(acc, im[k], im[k], acc);
    }
  }
  return acc * 2.0;
}

}  // namespace

template <class Real>
HermitianMatrix<Real>::HermitianMatrix(std::size_t n, Precision p)
    : n_(n), prec_(p), re_(n * (n + 1) / 2, make_real<Real>(0.0, p)), im_(re_) {}

template <class Real>
HermitianMatrix<Real> HermitianMatrix<Real>::from_full(std::size_t n,
                                                       const std::vector<Complex<Real>>& e) {
  if (e.size() != n * n) throw DomainError("HermitianMatrix: entry count mismatch");
  Precision p = n ? precision_of(e[0].re) : Precision{kDefaultBits};
  HermitianMatrix m(n, p);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const auto& u = e[i * n + j];
      const auto& l = e[j * n + i];
      if (!(u.re == l.re) || !(u.im == -l.im)) {
        throw DomainError("HermitianMatrix: entries (" + std::to_string(i) + "," +
                          std::to_string(j) + ") not conjugate-symmetric");
      }
      m.set(i, j, u);
    }
  }
  return m;
}

template <class Real>
Complex<Real> HermitianMatrix<Real>::operator()(std::size_t i, std::size_t j) const {
  if (i <= j) return {re_[index(i, j)], im_[index(i, j)]};
  return {re_[index(j, i)], -im_[index(j, i)]};
}

template <class Real>
void HermitianMatrix<Real>::set(std::size_t i, std::size_t j, const Complex<Real>& v) {
  if (i > j) throw DomainError("HermitianMatrix::set: lower triangle is derived");
  if (i == j && !(v.im == 0.0)) throw DomainError("HermitianMatrix::set: diagonal must be real");
  re_[index(i, j)] = v.re;
  im_[index(i, j)] = v.im;
}

template <class Real>
void HermitianMatrix<Real>::set_diagonal(std::size_t i, const Real& v) {
  re_[index(i, i)] = v;
  im_[index(i, i)] = 0.0;
}

template <class Real>
Real HermitianMatrix<Real>::frobenius_norm() const {
  using std::sqrt;
  Real acc = off_norm2(re_, im_, n_, prec_);
  for (std::size_t i = 0; i < n_; ++i) set_fma(acc, re_[index(i, i)], re_[index(i, i)], acc);
  return sqrt(acc);
}

template <class Real>
Real HermitianMatrix<Real>::trace() const {
  Real acc = make_real<Real>(0.0, prec_);
  for (std::size_t i = 0; i < n_; ++i) acc += re_[index(i, i)];
  return acc;
}

template <class Real>
Spectrum<Real> hermitian_eigenvalues(const HermitianMatrix<Real>& m, JacobiOptions opts) {
  using std::abs;
  using std::hypot;
  using std::sqrt;
  const std::size_t n = m.dimension();
  const Precision p = m.precision();
  const unsigned bits = RealTraits<Real>::bits(p);
  std::vector<Real> re = m.re();
  std::vector<Real> im = m.im();
  auto idx = [n](std::size_t i, std::size_t j) { return i * n - i * (i + 1) / 2 + j; };
  Spectrum<Real> out{{}, p, 0, 0.0};

  const Real fro2 = [&] {
    Real f = m.frobenius_norm();
    return Real(f * f);
  }();
  Real tol2 = fro2;
  {
    Real tol = make_real<Real>(1.0, p);
    for (unsigned k = 0; k + 16 < bits; ++k) tol *= 0.5;
    tol2 *= tol * tol;
  }
  // Relative skip threshold for an individual rotation.
  Real eps2 = make_real<Real>(1.0, p);
  for (unsigned k = 0; k < 2 * bits; ++k) eps2 *= 0.5;

  Real kp_re(make_real<Real>(0.0, p)), kp_im(kp_re), kq_re(kp_re), kq_im(kp_re);
  Real w_re(kp_re), w_im(kp_re), tmp(kp_re), out_re(kp_re), out_im(kp_re);

  int sweep = 0;
  for (;; ++sweep) {
    Real off2 = off_norm2(re, im, n, p);
    if (off2 <= tol2 || n < 2) {
      out.off_ratio = fro2 == 0.0 ? 0.0 : std::sqrt(to_double(Real(off2 / fro2)));
      break;
    }
    if (sweep >= opts.max_sweeps) {
      throw ConvergenceError("hermitian_eigenvalues: sweep cap reached",
                             std::sqrt(to_double(Real(off2 / fro2))));
    }
    for (std::size_t pi = 0; pi + 1 < n; ++pi) {
      for (std::size_t qi = pi + 1; qi < n; ++qi) {
        const std::size_t ipq = idx(pi, qi);
        if (re[ipq] == 0.0 && im[ipq] == 0.0) continue;
        Real r2 = re[ipq] * re[ipq] + im[ipq] * im[ipq];
        Real& app = re[idx(pi, pi)];
        Real& aqq = re[idx(qi, qi)];
        if (r2 <= eps2 * abs(Real(app * aqq))) {
          re[ipq] = 0.0;
          im[ipq] = 0.0;
          continue;
        }
        Real r = sqrt(r2);
        Real theta = (aqq - app) / (r * 2.0);
        Real t = 1.0 / (abs(theta) + sqrt(Real(theta * theta + 1.0)));
        if (theta < 0.0) t = -t;
        Real c = 1.0 / sqrt(Real(t * t + 1.0));
        Real s = t * c;
        // e^{-i alpha} with a_pq = r e^{i alpha}
        Real cr = re[ipq] / r;
        Real ci = -im[ipq] / r;

        for (std::size_t k = 0; k < n; ++k) {
          if (k == pi || k == qi) continue;
          // Load A(k,p), A(k,q); storage holds the upper triangle.
          const bool kp_upper = k < pi;
          const bool kq_upper = k < qi;
          const std::size_t ikp = kp_upper ? idx(k, pi) : idx(pi, k);
          const std::size_t ikq = kq_upper ? idx(k, qi) : idx(qi, k);
          assign(kp_re, re[ikp]);
          if (kp_upper) assign(kp_im, im[ikp]); else assign_neg(kp_im, im[ikp]);
          assign(kq_re, re[ikq]);
          if (kq_upper) assign(kq_im, im[ikq]); else assign_neg(kq_im, im[ikq]);

          // w = e^{-i alpha} A(k,q)
          set_mul(tmp, ci, kq_im);
          set_fms(w_re, cr, kq_re, tmp);
          set_mul(tmp, ci, kq_re);
          set_fma(w_im, cr, kq_im, tmp);

          // A(k,p) <- c A(k,p) - s w
          set_mul(tmp, s, w_re);
          set_fms(out_re, c, kp_re, tmp);
          set_mul(tmp, s, w_im);
          set_fms(out_im, c, kp_im, tmp);
          assign(re[ikp], out_re);
          if (kp_upper) assign(im[ikp], out_im); else assign_neg(im[ikp], out_im);

          // A(k,q) <- s A(k,p) + c w
          set_mul(tmp, c, w_re);
          set_fma(out_re, s, kp_re, tmp);
          set_mul(tmp, c, w_im);
          set_fma(out_im, s, kp_im, tmp);
          assign(re[ikq], out_re);
          if (kq_upper) assign(im[ikq], out_im); else assign_neg(im[ikq], out_im);
        }
        Real tr = t * r;
        app -= tr;
        aqq += tr;
        re[ipq] = 0.0;
        im[ipq] = 0.0;
      }
    }
  }
  out.sweeps = sweep;
  out.values.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.values.push_back(re[idx(i, i)]);
  std::sort(out.values.begin(), out.values.end(),
            [](const Real& a, const Real& b) { return a > b; });
  return out;
}

template class HermitianMatrix<double>;
template class HermitianMatrix<BigReal>;
template Spectrum<double> hermitian_eigenvalues<double>(const HermitianMatrix<double>&,
                                                        JacobiOptions);
template Spectrum<BigReal> hermitian_eigenvalues<BigReal>(const HermitianMatrix<BigReal>&,
                                                          JacobiOptions);

}  // namespace magspec
