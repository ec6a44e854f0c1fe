// Copyright (c) thermobloch contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <type_traits>

#include "thermobloch/bigfloat.hpp"

namespace thermobloch::num {

// Complex scalar over either double or BigFloat. std::complex is only
// specified for the builtin floating types, so we carry our own.
template <class R>
struct Cx {
  R re, im;

  Cx() : re(), im() {}
  Cx(R r, R i) : re(std::move(r)), im(std::move(i)) {}
  explicit Cx(R r) : re(std::move(r)), im(Rt<R>::make(0.0, Rt<R>::bits(re))) {}
  static Cx make(double r, double i, long bits) {
    return Cx(Rt<R>::make(r, bits), Rt<R>::make(i, bits));
  }
  static Cx zero(long bits) { return make(0.0, 0.0, bits); }
  static Cx one(long bits) { return make(1.0, 0.0, bits); }

  long bits() const {
    long a = Rt<R>::bits(re), b = Rt<R>::bits(im);
    return a > b ? a : b;
  }
  bool is_finite() const { return Rt<R>::finite(re) && Rt<R>::finite(im); }
  Cx<double> to_double() const {
    return {Rt<R>::to_double(re), Rt<R>::to_double(im)};
  }

  friend Cx operator+(const Cx& a, const Cx& b) { return {a.re + b.re, a.im + b.im}; }
  friend Cx operator-(const Cx& a, const Cx& b) { return {a.re - b.re, a.im - b.im}; }
  friend Cx operator*(const Cx& a, const Cx& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Cx operator*(const Cx& a, const R& s) { return {a.re * s, a.im * s}; }
  friend Cx operator*(const R& s, const Cx& a) { return a * s; }
  friend Cx operator*(const Cx& a, double s)
    requires(!std::is_same_v<R, double>)
  {
    return {a.re * s, a.im * s};
  }
  friend Cx operator*(double s, const Cx& a)
    requires(!std::is_same_v<R, double>)
  {
    return {a.re * s, a.im * s};
  }
  friend Cx operator/(const Cx& a, double s)
    requires(!std::is_same_v<R, double>)
  {
    return {a.re / s, a.im / s};
  }
  friend Cx operator/(const Cx& a, const R& s) { return {a.re / s, a.im / s}; }
  // Smith's algorithm; scale-free thanks to the wide exponent range, but the
  // branch still avoids needless cancellation.
  friend Cx operator/(const Cx& a, const Cx& b) {
    if (abs1(b) == 0.0) {
      return {a.re / b.re, a.im / b.re};  // propagate inf/nan
    }
    if (Rt<R>::habs(b.re) >= Rt<R>::habs(b.im)) {
      R r = b.im / b.re;
      R d = b.re + b.im * r;
      return {(a.re + a.im * r) / d, (a.im - a.re * r) / d};
    }
    R r = b.re / b.im;
    R d = b.im + b.re * r;
    return {(a.re * r + a.im) / d, (a.im * r - a.re) / d};
  }
  Cx operator-() const { return {-re, -im}; }
  Cx& operator+=(const Cx& b) {
    re += b.re;
    im += b.im;
    return *this;
  }
  Cx& operator-=(const Cx& b) {
    re -= b.re;
    im -= b.im;
    return *this;
  }
  Cx& operator*=(const Cx& b) {
    *this = *this * b;
    return *this;
  }
  Cx& operator*=(double s) {
    re *= s;
    im *= s;
    return *this;
  }
  friend bool operator==(const Cx& a, const Cx& b) {
    return a.re == b.re && a.im == b.im;
  }

  friend Cx conj(const Cx& a) { return {a.re, -a.im}; }
  friend R abs(const Cx& a) { return Rt<R>::hhypot(a.re, a.im); }
  // |re| + |im|: the cheap norm used for pivot choices and balancing.
  friend R abs1(const Cx& a) { return Rt<R>::habs(a.re) + Rt<R>::habs(a.im); }
  friend R norm(const Cx& a) { return a.re * a.re + a.im * a.im; }
  friend R arg(const Cx& a) { return Rt<R>::hatan2(a.im, a.re); }
  friend Cx exp(const Cx& a) {
    R m = Rt<R>::hexp(a.re);
    return {m * Rt<R>::hcos(a.im), m * Rt<R>::hsin(a.im)};
  }
  friend Cx log(const Cx& a) {
    return {Rt<R>::hlog(abs(a)), arg(a)};
  }
  friend Cx sqrt(const Cx& a) {
    long bits = a.bits();
    R zero = Rt<R>::make(0.0, bits);
    if (a.re == zero && a.im == zero) return {zero, zero};
    R m = abs(a);
    R w = Rt<R>::hsqrt((m + Rt<R>::habs(a.re)) / 2.0);
    if (a.re >= zero) {
      return {w, a.im / (w * 2.0)};
    }
    R v = Rt<R>::habs(a.im) / (w * 2.0);
    if (a.im >= zero) return {v, w};
    return {v, -w};
  }
};

// z^(1/3) via the principal branch.
template <class R>
Cx<R> cbrt(const Cx<R>& z) {
  long bits = z.bits();
  if (abs1(z) == 0.0) return Cx<R>::zero(bits);
  R m = abs(z);
  R r = Rt<R>::hexp(Rt<R>::hlog(m) / 3.0);
  R t = arg(z) / 3.0;
  return {r * Rt<R>::hcos(t), r * Rt<R>::hsin(t)};
}

}  // namespace thermobloch::num
