#pragma once

#include <mpfr.h>

#include <cmath>
#include <compare>
#include <limits>
#include <string>
#include <string_view>

#include "magspec/errors.hpp"

namespace magspec {

// Working precision in bits. Always passed explicitly; there is no global default.
struct Precision {
  unsigned bits = 256;
  friend bool operator==(Precision, Precision) = default;
};

inline constexpr unsigned kDefaultBits = 256;
inline constexpr unsigned kMinBits = 64;

// RAII wrapper around mpfr_t carrying its own precision. Arithmetic results
// take the larger precision of the operands. Non-finite results throw.
class BigReal {
 public:
  explicit BigReal(Precision p);
  BigReal(double v, Precision p);
  BigReal(long v, Precision p);
  BigReal(int v, Precision p) : BigReal(static_cast<long>(v), p) {}
  BigReal(std::string_view decimal, Precision p);

  BigReal(const BigReal& other);
  BigReal(BigReal&& other) noexcept;
  BigReal& operator=(const BigReal& other);
  BigReal& operator=(BigReal&& other) noexcept;
  BigReal& operator=(double v);
  ~BigReal();

  Precision precision() const { return {static_cast<unsigned>(mpfr_get_prec(v_))}; }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long double to_long_double() const { return mpfr_get_ld(v_, MPFR_RNDN); }
  // Scientific notation with `digits` significant digits.
  std::string to_string(int digits) const;
  // Fixed notation with `digits` digits after the decimal point.
  std::string to_fixed(int digits) const;

  int sign() const { return mpfr_sgn(v_); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  // Binary exponent e with |x| in [2^(e-1), 2^e); zero gives a very negative value.
  long exponent2() const;

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  BigReal& operator+=(const BigReal& o);
  BigReal& operator-=(const BigReal& o);
  BigReal& operator*=(const BigReal& o);
  BigReal& operator/=(const BigReal& o);
  BigReal& operator*=(double o);
  BigReal& operator/=(double o);
  BigReal& operator+=(double o);
  BigReal& operator-=(double o);
  BigReal operator-() const;

  void negate() { mpfr_neg(v_, v_, MPFR_RNDN); }
  // Throws NumericError on NaN or infinity.
  void check(const char* where) const {
    if (!mpfr_number_p(v_)) throw NumericError(std::string("non-finite value in ") + where);
  }

  static BigReal pi(Precision p);
  static BigReal euler_gamma(Precision p);

 private:
  mpfr_t v_;
};

BigReal operator+(const BigReal& a, const BigReal& b);
BigReal operator-(const BigReal& a, const BigReal& b);
BigReal operator*(const BigReal& a, const BigReal& b);
BigReal operator/(const BigReal& a, const BigReal& b);
BigReal operator+(const BigReal& a, double b);
BigReal operator-(const BigReal& a, double b);
BigReal operator*(const BigReal& a, double b);
BigReal operator/(const BigReal& a, double b);
BigReal operator+(double a, const BigReal& b);
BigReal operator-(double a, const BigReal& b);
BigReal operator*(double a, const BigReal& b);
BigReal operator/(double a, const BigReal& b);

bool operator==(const BigReal& a, const BigReal& b);
std::partial_ordering operator<=>(const BigReal& a, const BigReal& b);
bool operator==(const BigReal& a, double b);
std::partial_ordering operator<=>(const BigReal& a, double b);

BigReal exp(const BigReal& x);
BigReal expm1(const BigReal& x);
BigReal log(const BigReal& x);
BigReal log1p(const BigReal& x);
BigReal sqrt(const BigReal& x);
BigReal sin(const BigReal& x);
BigReal cos(const BigReal& x);
BigReal atan2(const BigReal& y, const BigReal& x);
BigReal abs(const BigReal& x);
BigReal pow(const BigReal& x, const BigReal& y);
BigReal pow(const BigReal& x, long n);
BigReal hypot(const BigReal& x, const BigReal& y);
BigReal max(const BigReal& a, const BigReal& b);
BigReal min(const BigReal& a, const BigReal& b);

// In-place kernels for hot loops; r may alias an operand.
inline void set_mul(BigReal& r, const BigReal& a, const BigReal& b) {
  mpfr_mul(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
}
inline void set_add(BigReal& r, const BigReal& a, const BigReal& b) {
  mpfr_add(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
}
inline void set_sub(BigReal& r, const BigReal& a, const BigReal& b) {
  mpfr_sub(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
}
// r = a*b + c
inline void set_fma(BigReal& r, const BigReal& a, const BigReal& b, const BigReal& c) {
  mpfr_fma(r.raw(), a.raw(), b.raw(), c.raw(), MPFR_RNDN);
}
// r = a*b - c
inline void set_fms(BigReal& r, const BigReal& a, const BigReal& b, const BigReal& c) {
  mpfr_fms(r.raw(), a.raw(), b.raw(), c.raw(), MPFR_RNDN);
}
inline void set_mul(double& r, double a, double b) { r = a * b; }
inline void set_add(double& r, double a, double b) { r = a + b; }
inline void set_sub(double& r, double a, double b) { r = a - b; }
inline void set_fma(double& r, double a, double b, double c) { r = std::fma(a, b, c); }
inline void set_fms(double& r, double a, double b, double c) { r = std::fma(a, b, -c); }

// Uniform construction and constants for templated algorithms.
template <class Real>
struct RealTraits;

template <>
struct RealTraits<double> {
  static double from(double v, Precision) { return v; }
  static double from_string(std::string_view s, Precision) { return std::stod(std::string(s)); }
  static double pi(Precision) { return 3.14159265358979323846; }
  static double euler_gamma(Precision) { return 0.57721566490153286061; }
  static Precision precision_of(double) { return {53}; }
  static double to_double(double v) { return v; }
  // 2^-bits for the effective precision.
  static double epsilon(Precision) { return std::numeric_limits<double>::epsilon() / 2; }
  static unsigned bits(Precision) { return 53; }
};

template <>
struct RealTraits<BigReal> {
  static BigReal from(double v, Precision p) { return BigReal(v, p); }
  static BigReal from_string(std::string_view s, Precision p) { return BigReal(s, p); }
  static BigReal pi(Precision p) { return BigReal::pi(p); }
  static BigReal euler_gamma(Precision p) { return BigReal::euler_gamma(p); }
  static Precision precision_of(const BigReal& v) { return v.precision(); }
  static double to_double(const BigReal& v) { return v.to_double(); }
  static double epsilon(Precision p) { return std::ldexp(1.0, -static_cast<int>(p.bits)); }
  static unsigned bits(Precision p) { return p.bits; }
};

// |term| < 2^-bits |ref|, robust beyond the double exponent range.
inline bool negligible(double term, double ref, Precision) {
  return std::fabs(term) <= std::numeric_limits<double>::epsilon() * 0.5 * std::fabs(ref);
}
inline bool negligible(const BigReal& term, const BigReal& ref, Precision p) {
  if (term.is_zero()) return true;
  if (ref.is_zero()) return false;
  return term.exponent2() < ref.exponent2() - static_cast<long>(p.bits);
}

template <class Real>
Real make_real(double v, Precision p) {
  return RealTraits<Real>::from(v, p);
}

template <class Real>
double to_double(const Real& v) {
  return RealTraits<Real>::to_double(v);
}

template <class Real>
Precision precision_of(const Real& v) {
  return RealTraits<Real>::precision_of(v);
}

}  // namespace magspec
