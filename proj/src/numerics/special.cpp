#include "magspec/numerics/special.hpp"

#include <gmp.h>

#include <cmath>
#include <deque>
#include <mutex>
#include <vector>

namespace magspec {

namespace {

constexpr unsigned kGuardBits = 32;

// Exact Bernoulli numbers B_0..B_{2K} as rationals, grown on demand.
class BernoulliTable {
 public:
  ~BernoulliTable() {
    for (auto& q : values_) mpq_clear(q.v);
  }

  // B_{2k} rounded to the target precision (or double).
  template <class Real>
  Real even(int k, Precision p) {
    std::lock_guard<std::mutex> lock(mutex_);
    grow(2 * k);
    if constexpr (std::is_same_v<Real, double>) {
      return mpq_get_d(values_[2 * k].v);
    } else {
      BigReal r(p);
      mpfr_set_q(r.raw(), values_[2 * k].v, MPFR_RNDN);
      return r;
    }
  }

 private:
  void grow(int m) {
    while (static_cast<int>(values_.size()) <= m) {
      int n = static_cast<int>(values_.size());
      mpq_t b;
      mpq_init(b);
      if (n == 0) {
        mpq_set_ui(b, 1, 1);
      } else {
        // sum_{j=0}^{n} C(n+1, j) B_j = 0
        mpq_t acc, term;
        mpz_t binom;
        mpq_init(acc);
        mpq_init(term);
        mpz_init(binom);
        for (int j = 0; j < n; ++j) {
          mpz_bin_uiui(binom, n + 1, j);
          mpq_set_z(term, binom);
          mpq_mul(term, term, values_[j].v);
          mpq_add(acc, acc, term);
        }
        mpq_set_ui(term, n + 1, 1);
        mpq_div(b, acc, term);
        mpq_neg(b, b);
        mpq_clear(acc);
        mpq_clear(term);
        mpz_clear(binom);
      }
      values_.emplace_back();
      mpq_init(values_.back().v);
      mpq_set(values_.back().v, b);
      mpq_clear(b);
    }
  }

  struct Rational {
    mpq_t v;
  };
  std::mutex mutex_;
  std::deque<Rational> values_;
};

BernoulliTable& bernoulli() {
  static BernoulliTable table;
  return table;
}

template <class Real>
Precision working(const Real& x) {
  if constexpr (std::is_same_v<Real, double>) {
    return {53};
  } else {
    return {x.precision().bits + kGuardBits};
  }
}

template <class Real>
Real widen(const Real& x, Precision wp) {
  if constexpr (std::is_same_v<Real, double>) {
    (void)wp;
    return x;
  } else {
    BigReal r(wp);
    mpfr_set(r.raw(), x.raw(), MPFR_RNDN);
    return r;
  }
}

template <class Real>
Real narrow(const Real& x, Precision p) {
  if constexpr (std::is_same_v<Real, double>) {
    (void)p;
    return x;
  } else {
    BigReal r(p);
    mpfr_set(r.raw(), x.raw(), MPFR_RNDN);
    return r;
  }
}

template <class Real>
bool small_integer(const Real& x, unsigned long& k) {
  if constexpr (std::is_same_v<Real, double>) {
    if (x <= 1000.0 && std::floor(x) == x) {
      k = static_cast<unsigned long>(x);
      return true;
    }
    return false;
  } else {
    if (mpfr_integer_p(x.raw()) && x <= 1000.0) {
      k = mpfr_get_ui(x.raw(), MPFR_RNDN);
      return true;
    }
    return false;
  }
}

// Stirling series for y large enough that the asymptotic terms fall below eps.
template <class Real>
Real stirling(const Real& y, Precision wp) {
  using std::log;
  Real two_pi = RealTraits<Real>::pi(wp) * 2.0;
  Real result = (y - 0.5) * log(y) - y + log(two_pi) * 0.5;
  Real inv_y2 = 1.0 / (y * y);
  Real power = 1.0 / y;
  double last = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 400; ++k) {
    Real term = bernoulli().even<Real>(k, wp) * power / (2.0 * k * (2.0 * k - 1.0));
    double mag = std::fabs(to_double(term / result));
    if (mag > last) throw ConvergenceError("log_gamma: Stirling series diverged", mag);
    result += term;
    if (negligible(term, result, wp)) return result;
    last = mag;
    power *= inv_y2;
  }
  throw ConvergenceError("log_gamma: Stirling series did not converge", last);
}

}  // namespace

BigReal log_factorial(unsigned long k, Precision p) {
  mpz_t f;
  mpz_init(f);
  mpz_fac_ui(f, k);
  BigReal r(p);
  mpfr_set_z(r.raw(), f, MPFR_RNDN);
  mpz_clear(f);
  mpfr_log(r.raw(), r.raw(), MPFR_RNDN);
  return r;
}

template <class Real>
Real log_gamma(const Real& x) {
  using std::log;
  if (!(x > 0.0)) throw DomainError("log_gamma: argument must be positive");
  if constexpr (std::is_same_v<Real, double>) {
    return std::lgamma(x);
  } else {
    const Precision p = precision_of(x);
    unsigned long k = 0;
    if (small_integer(x, k)) return narrow(log_factorial(k - 1, {p.bits + kGuardBits}), p);
    const Precision wp = working(x);
    Real y = widen(x, wp);
    const double threshold = std::max(12.0, 0.4 * wp.bits);
    Real shift_product = make_real<Real>(1.0, wp);
    while (y < threshold) {
      shift_product *= y;
      y += 1.0;
    }
    Real result = stirling(y, wp) - log(shift_product);
    return narrow(result, p);
  }
}

template <class Real>
Real lower_incomplete_gamma(const Real& a_in, const Real& x_in) {
  using std::exp;
  using std::log;
  if (!(a_in > 0.0)) throw DomainError("lower_incomplete_gamma: a must be positive");
  if (x_in < 0.0) throw DomainError("lower_incomplete_gamma: x must be non-negative");
  const Precision p = precision_of(a_in);
  if (x_in == 0.0) return make_real<Real>(0.0, p);
  const Precision wp = working(a_in);
  const Real a = widen(a_in, wp);
  const Real x = widen(x_in, wp);
  const Real prefactor = exp(a * log(x) - x);
  const int max_iter = 100000;

  if (x < a + 1.0) {
    Real denom = a;
    Real term = 1.0 / a;
    Real sum = term;
    for (int k = 1; k < max_iter; ++k) {
      denom += 1.0;
      term *= x / denom;
      sum += term;
      if (negligible(term, sum, wp)) {
        return narrow(Real(sum * prefactor), p);
      }
    }
    throw ConvergenceError("lower_incomplete_gamma: series did not converge", to_double(term));
  }

  // Modified Lentz for Gamma(a, x) = prefactor / (x + 1 - a - 1(1-a)/(x + 3 - a - ...)).
  const double tiny = 1e-300;
  Real bq = x + 1.0 - a;
  Real c = make_real<Real>(1.0 / tiny, wp);
  Real d = 1.0 / bq;
  Real h = d;
  for (int i = 1; i < max_iter; ++i) {
    Real an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    bq += 2.0;
    d = an * d + bq;
    if (std::fabs(to_double(d)) < tiny) d = make_real<Real>(tiny, wp);
    c = bq + an / c;
    if (std::fabs(to_double(c)) < tiny) c = make_real<Real>(tiny, wp);
    d = 1.0 / d;
    Real delta = d * c;
    h *= delta;
    if (negligible(Real(delta - 1.0), h, wp)) {
      Real upper = prefactor * h;
      Real full = exp(log_gamma(a));
      return narrow(Real(full - upper), p);
    }
  }
  throw ConvergenceError("lower_incomplete_gamma: continued fraction did not converge", 1.0);
}

template double log_gamma<double>(const double&);
template BigReal log_gamma<BigReal>(const BigReal&);
template double lower_incomplete_gamma<double>(const double&, const double&);
template BigReal lower_incomplete_gamma<BigReal>(const BigReal&, const BigReal&);

}  // namespace magspec
