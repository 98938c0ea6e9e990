#include "magspec/numerics/bigreal.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace magspec {

namespace {

mpfr_prec_t checked_bits(Precision p) {
  if (p.bits < kMinBits) throw DomainError("precision below 64 bits");
  return static_cast<mpfr_prec_t>(p.bits);
}

Precision wider(const BigReal& a, const BigReal& b) {
  return {std::max(a.precision().bits, b.precision().bits)};
}

template <class Op>
BigReal binary(const BigReal& a, const BigReal& b, Op op, const char* where) {
  BigReal r(wider(a, b));
  op(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
  r.check(where);
  return r;
}

template <class Op>
BigReal unary(const BigReal& a, Op op, const char* where) {
  BigReal r(a.precision());
  op(r.raw(), a.raw(), MPFR_RNDN);
  r.check(where);
  return r;
}

}  // namespace

BigReal::BigReal(Precision p) {
  mpfr_init2(v_, checked_bits(p));
  mpfr_set_zero(v_, 1);
}

BigReal::BigReal(double v, Precision p) {
  mpfr_init2(v_, checked_bits(p));
  mpfr_set_d(v_, v, MPFR_RNDN);
  check("BigReal(double)");
}

BigReal::BigReal(long v, Precision p) {
  mpfr_init2(v_, checked_bits(p));
  mpfr_set_si(v_, v, MPFR_RNDN);
}

BigReal::BigReal(std::string_view decimal, Precision p) {
  mpfr_init2(v_, checked_bits(p));
  std::string s(decimal);
  if (mpfr_set_str(v_, s.c_str(), 10, MPFR_RNDN) != 0) {
    mpfr_clear(v_);
    throw DomainError("not a decimal number: " + s);
  }
  check("BigReal(string)");
}

BigReal::BigReal(const BigReal& other) {
  mpfr_init2(v_, mpfr_get_prec(other.v_));
  mpfr_set(v_, other.v_, MPFR_RNDN);
}

BigReal::BigReal(BigReal&& other) noexcept {
  mpfr_init2(v_, mpfr_get_prec(other.v_));
  mpfr_swap(v_, other.v_);
}

BigReal& BigReal::operator=(const BigReal& other) {
  if (this != &other) {
    if (mpfr_get_prec(v_) != mpfr_get_prec(other.v_)) mpfr_set_prec(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  return *this;
}

BigReal& BigReal::operator=(BigReal&& other) noexcept {
  mpfr_swap(v_, other.v_);
  return *this;
}

BigReal& BigReal::operator=(double v) {
  mpfr_set_d(v_, v, MPFR_RNDN);
  check("BigReal=double");
  return *this;
}

BigReal::~BigReal() { mpfr_clear(v_); }

std::string BigReal::to_string(int digits) const {
  std::vector<char> buf(static_cast<std::size_t>(digits) + 64);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Re", std::max(digits - 1, 0), v_);
  return buf.data();
}

std::string BigReal::to_fixed(int digits) const {
  long e = mpfr_zero_p(v_) ? 0 : std::max<long>(mpfr_get_exp(v_), 0);
  std::vector<char> buf(static_cast<std::size_t>(digits + e / 3 + 64));
  mpfr_snprintf(buf.data(), buf.size(), "%.*Rf", std::max(digits, 0), v_);
  return buf.data();
}

long BigReal::exponent2() const {
  if (mpfr_zero_p(v_)) return std::numeric_limits<long>::min() / 2;
  return mpfr_get_exp(v_);
}

BigReal& BigReal::operator+=(const BigReal& o) {
  if (o.precision().bits > precision().bits) mpfr_prec_round(v_, o.precision().bits, MPFR_RNDN);
  mpfr_add(v_, v_, o.v_, MPFR_RNDN);
  check("+=");
  return *this;
}
BigReal& BigReal::operator-=(const BigReal& o) {
  if (o.precision().bits > precision().bits) mpfr_prec_round(v_, o.precision().bits, MPFR_RNDN);
  mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
  check("-=");
  return *this;
}
BigReal& BigReal::operator*=(const BigReal& o) {
  if (o.precision().bits > precision().bits) mpfr_prec_round(v_, o.precision().bits, MPFR_RNDN);
  mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
  check("*=");
  return *this;
}
BigReal& BigReal::operator/=(const BigReal& o) {
  if (o.precision().bits > precision().bits) mpfr_prec_round(v_, o.precision().bits, MPFR_RNDN);
  if (o.is_zero()) throw NumericError("division by zero");
  mpfr_div(v_, v_, o.v_, MPFR_RNDN);
  check("/=");
  return *this;
}
BigReal& BigReal::operator*=(double o) {
  mpfr_mul_d(v_, v_, o, MPFR_RNDN);
  check("*=");
  return *this;
}
BigReal& BigReal::operator/=(double o) {
  if (o == 0.0) throw NumericError("division by zero");
  mpfr_div_d(v_, v_, o, MPFR_RNDN);
  check("/=");
  return *this;
}
BigReal& BigReal::operator+=(double o) {
  mpfr_add_d(v_, v_, o, MPFR_RNDN);
  check("+=");
  return *this;
}
BigReal& BigReal::operator-=(double o) {
  mpfr_sub_d(v_, v_, o, MPFR_RNDN);
  check("-=");
  return *this;
}

BigReal BigReal::operator-() const {
  BigReal r(*this);
  r.negate();
  return r;
}

BigReal BigReal::pi(Precision p) {
  BigReal r(p);
  mpfr_const_pi(r.v_, MPFR_RNDN);
  return r;
}

BigReal BigReal::euler_gamma(Precision p) {
  BigReal r(p);
  mpfr_const_euler(r.v_, MPFR_RNDN);
  return r;
}

BigReal operator+(const BigReal& a, const BigReal& b) { return binary(a, b, mpfr_add, "+"); }
BigReal operator-(const BigReal& a, const BigReal& b) { return binary(a, b, mpfr_sub, "-"); }
BigReal operator*(const BigReal& a, const BigReal& b) { return binary(a, b, mpfr_mul, "*"); }
BigReal operator/(const BigReal& a, const BigReal& b) {
  if (b.is_zero()) throw NumericError("division by zero");
  return binary(a, b, mpfr_div, "/");
}

BigReal operator+(const BigReal& a, double b) { BigReal r(a); r += b; return r; }
BigReal operator-(const BigReal& a, double b) { BigReal r(a); r -= b; return r; }
BigReal operator*(const BigReal& a, double b) { BigReal r(a); r *= b; return r; }
BigReal operator/(const BigReal& a, double b) { BigReal r(a); r /= b; return r; }
BigReal operator+(double a, const BigReal& b) { return b + a; }
BigReal operator-(double a, const BigReal& b) {
  BigReal r(b.precision());
  mpfr_d_sub(r.raw(), a, b.raw(), MPFR_RNDN);
  r.check("-");
  return r;
}
BigReal operator*(double a, const BigReal& b) { return b * a; }
BigReal operator/(double a, const BigReal& b) {
  if (b.is_zero()) throw NumericError("division by zero");
  BigReal r(b.precision());
  mpfr_d_div(r.raw(), a, b.raw(), MPFR_RNDN);
  r.check("/");
  return r;
}

bool operator==(const BigReal& a, const BigReal& b) { return mpfr_equal_p(a.raw(), b.raw()) != 0; }
std::partial_ordering operator<=>(const BigReal& a, const BigReal& b) {
  int c = mpfr_cmp(a.raw(), b.raw());
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}
bool operator==(const BigReal& a, double b) { return mpfr_cmp_d(a.raw(), b) == 0; }
std::partial_ordering operator<=>(const BigReal& a, double b) {
  int c = mpfr_cmp_d(a.raw(), b);
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

BigReal exp(const BigReal& x) { return unary(x, mpfr_exp, "exp"); }
BigReal expm1(const BigReal& x) { return unary(x, mpfr_expm1, "expm1"); }
BigReal log(const BigReal& x) {
  if (x.sign() <= 0) throw DomainError("log of non-positive value");
  return unary(x, mpfr_log, "log");
}
BigReal log1p(const BigReal& x) {
  if (x <= -1.0) throw DomainError("log1p argument <= -1");
  return unary(x, mpfr_log1p, "log1p");
}
BigReal sqrt(const BigReal& x) {
  if (x.sign() < 0) throw DomainError("sqrt of negative value");
  return unary(x, mpfr_sqrt, "sqrt");
}
BigReal sin(const BigReal& x) { return unary(x, mpfr_sin, "sin"); }
BigReal cos(const BigReal& x) { return unary(x, mpfr_cos, "cos"); }
BigReal atan2(const BigReal& y, const BigReal& x) { return binary(y, x, mpfr_atan2, "atan2"); }
BigReal abs(const BigReal& x) { return unary(x, mpfr_abs, "abs"); }
BigReal pow(const BigReal& x, const BigReal& y) { return binary(x, y, mpfr_pow, "pow"); }
BigReal pow(const BigReal& x, long n) {
  BigReal r(x.precision());
  mpfr_pow_si(r.raw(), x.raw(), n, MPFR_RNDN);
  r.check("pow");
  return r;
}
BigReal hypot(const BigReal& x, const BigReal& y) { return binary(x, y, mpfr_hypot, "hypot"); }
BigReal max(const BigReal& a, const BigReal& b) { return a < b ? b : a; }
BigReal min(const BigReal& a, const BigReal& b) { return b < a ? b : a; }

}  // namespace magspec
