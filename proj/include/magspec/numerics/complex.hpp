#pragma once

#include <cmath>
#include <complex>
#include <type_traits>

#include "magspec/numerics/bigreal.hpp"

namespace magspec {

// Complex number over a real type; both parts share the real type's precision.
template <class Real>
struct Complex {
  Real re;
  Real im;

  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
  static Complex zero(Precision p) { return {make_real<Real>(0.0, p), make_real<Real>(0.0, p)}; }
  static Complex real(Real r) {
    Real z = r;
    z = 0.0;
    return {std::move(r), std::move(z)};
  }

  Complex& operator+=(const Complex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Complex& operator-=(const Complex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  Complex& operator*=(const Complex& o) {
    Real r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
  }
  Complex& operator*=(const Real& s) {
    re *= s;
    im *= s;
    return *this;
  }
  template <class S>
    requires(std::is_same_v<S, double> && !std::is_same_v<Real, double>)
  Complex& operator*=(S s) {
    re *= s;
    im *= s;
    return *this;
  }
  Complex operator-() const { return {-re, -im}; }
};

using BigComplex = Complex<BigReal>;

template <class Real>
Complex<Real> operator+(Complex<Real> a, const Complex<Real>& b) {
  return a += b;
}
template <class Real>
Complex<Real> operator-(Complex<Real> a, const Complex<Real>& b) {
  return a -= b;
}
template <class Real>
Complex<Real> operator*(const Complex<Real>& a, const Complex<Real>& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
template <class Real>
Complex<Real> operator*(Complex<Real> a, const Real& s) {
  return a *= s;
}
template <class Real>
Complex<Real> operator*(const Real& s, Complex<Real> a) {
  return a *= s;
}
template <class Real>
Complex<Real> conj(const Complex<Real>& a) {
  return {a.re, -a.im};
}
// |a|^2
template <class Real>
Real norm(const Complex<Real>& a) {
  return a.re * a.re + a.im * a.im;
}
template <class Real>
Real abs(const Complex<Real>& a) {
  using std::hypot;
  return hypot(a.re, a.im);
}
template <class Real>
Complex<Real> polar(const Real& r, const Real& phase) {
  using std::cos;
  using std::sin;
  return {r * cos(phase), r * sin(phase)};
}
template <class Real>
Complex<Real> operator/(const Complex<Real>& a, const Complex<Real>& b) {
  Real d = norm(b);
  return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}

template <class Real>
std::complex<double> to_std(const Complex<Real>& a) {
  return {to_double(a.re), to_double(a.im)};
}
template <class Real>
Complex<Real> from_std(std::complex<double> z, Precision p) {
  return {make_real<Real>(z.real(), p), make_real<Real>(z.imag(), p)};
}

// Point or vector in the plane.
template <class Real>
struct Vec2 {
  Real x;
  Real y;
};

using Point = Vec2<double>;

// x ^ y = x1 y2 - x2 y1
template <class Real>
Real wedge(const Vec2<Real>& a, const Vec2<Real>& b) {
  return a.x * b.y - a.y * b.x;
}
template <class Real>
Real dot(const Vec2<Real>& a, const Vec2<Real>& b) {
  return a.x * b.x + a.y * b.y;
}
template <class Real>
Real dist2(const Vec2<Real>& a, const Vec2<Real>& b) {
  Real dx = a.x - b.x;
  Real dy = a.y - b.y;
  return dx * dx + dy * dy;
}
template <class Real>
Vec2<Real> operator+(const Vec2<Real>& a, const Vec2<Real>& b) {
  return {a.x + b.x, a.y + b.y};
}
template <class Real>
Vec2<Real> operator-(const Vec2<Real>& a, const Vec2<Real>& b) {
  return {a.x - b.x, a.y - b.y};
}
inline Point operator*(double s, const Point& a) { return {s * a.x, s * a.y}; }

template <class Real>
Vec2<double> to_point(const Vec2<Real>& a) {
  return {to_double(a.x), to_double(a.y)};
}

}  // namespace magspec
