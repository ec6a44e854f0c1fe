// Copyright (c) thermobloch contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <mpfr.h>

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace thermobloch::num {

// Arbitrary-precision real scalar with value semantics. Precision (in bits)
// travels with the value: assignment copies both, binary operations produce
// results at the wider of the two operand precisions. The unbounded exponent
// range matters as much as the mantissa width here: transfer-matrix entries
// for diffusive layers overflow IEEE doubles long before the mantissa runs
// out of digits.
class BigFloat {
 public:
  BigFloat() {
    mpfr_init2(v_, kDefaultBits);
    mpfr_set_zero(v_, 1);
  }
  explicit BigFloat(mpfr_prec_t bits) {
    mpfr_init2(v_, clamp(bits));
    mpfr_set_zero(v_, 1);
  }
  BigFloat(double d, mpfr_prec_t bits) {
    mpfr_init2(v_, clamp(bits));
    mpfr_set_d(v_, d, MPFR_RNDN);
  }
  BigFloat(const BigFloat& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  BigFloat(BigFloat&& o) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, o.v_);
  }
  BigFloat& operator=(const BigFloat& o) {
    if (this != &o) {
      if (mpfr_get_prec(v_) != mpfr_get_prec(o.v_))
        mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  BigFloat& operator=(BigFloat&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~BigFloat() { mpfr_clear(v_); }

  static BigFloat from_string(const std::string& s, mpfr_prec_t bits) {
    BigFloat r(bits);
    if (mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN) != 0)
      throw std::invalid_argument("BigFloat: unparsable literal '" + s + "'");
    return r;
  }
  // 2^e at the given precision (exact).
  static BigFloat pow2(long e, mpfr_prec_t bits) {
    BigFloat r(bits);
    mpfr_set_ui_2exp(r.v_, 1, e, MPFR_RNDN);
    return r;
  }
  static BigFloat pi(mpfr_prec_t bits) {
    BigFloat r(bits);
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
  }

  mpfr_prec_t bits() const { return mpfr_get_prec(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }
  bool is_nan() const { return mpfr_nan_p(v_) != 0; }
  bool is_inf() const { return mpfr_inf_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  // Binary exponent: value in [2^(e-1), 2^e). Zero/non-finite return LONG_MIN.
  long exponent() const {
    if (!is_finite() || is_zero()) return std::numeric_limits<long>::min();
    return static_cast<long>(mpfr_get_exp(v_));
  }

  std::string str(int digits = 20) const {
    char buf[128];
    if (digits > 80) digits = 80;
    mpfr_snprintf(buf, sizeof buf, "%.*Re", digits, v_);
    return buf;
  }

  // -- arithmetic -----------------------------------------------------------
  friend BigFloat operator+(const BigFloat& a, const BigFloat& b) {
    BigFloat r(maxp(a, b));
    mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat operator-(const BigFloat& a, const BigFloat& b) {
    BigFloat r(maxp(a, b));
    mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat operator*(const BigFloat& a, const BigFloat& b) {
    BigFloat r(maxp(a, b));
    mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat operator/(const BigFloat& a, const BigFloat& b) {
    BigFloat r(maxp(a, b));
    mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat operator+(const BigFloat& a, double d) {
    BigFloat r(a.bits());
    mpfr_add_d(r.v_, a.v_, d, MPFR_RNDN);
    return r;
  }
  friend BigFloat operator+(double d, const BigFloat& a) { return a + d; }
  friend BigFloat operator-(const BigFloat& a, double d) {
    BigFloat r(a.bits());
    mpfr_sub_d(r.v_, a.v_, d, MPFR_RNDN);
    return r;
  }
  friend BigFloat operator-(double d, const BigFloat& a) {
    BigFloat r(a.bits());
    mpfr_d_sub(r.v_, d, a.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat operator*(const BigFloat& a, double d) {
    BigFloat r(a.bits());
    mpfr_mul_d(r.v_, a.v_, d, MPFR_RNDN);
    return r;
  }
  friend BigFloat operator*(double d, const BigFloat& a) { return a * d; }
  friend BigFloat operator/(const BigFloat& a, double d) {
    BigFloat r(a.bits());
    mpfr_div_d(r.v_, a.v_, d, MPFR_RNDN);
    return r;
  }
  friend BigFloat operator/(double d, const BigFloat& a) {
    BigFloat r(a.bits());
    mpfr_d_div(r.v_, d, a.v_, MPFR_RNDN);
    return r;
  }
  BigFloat operator-() const {
    BigFloat r(bits());
    mpfr_neg(r.v_, v_, MPFR_RNDN);
    return r;
  }
  BigFloat& operator+=(const BigFloat& b) {
    promote(b.bits());
    mpfr_add(v_, v_, b.v_, MPFR_RNDN);
    return *this;
  }
  BigFloat& operator-=(const BigFloat& b) {
    promote(b.bits());
    mpfr_sub(v_, v_, b.v_, MPFR_RNDN);
    return *this;
  }
  BigFloat& operator*=(const BigFloat& b) {
    promote(b.bits());
    mpfr_mul(v_, v_, b.v_, MPFR_RNDN);
    return *this;
  }
  BigFloat& operator/=(const BigFloat& b) {
    promote(b.bits());
    mpfr_div(v_, v_, b.v_, MPFR_RNDN);
    return *this;
  }
  BigFloat& operator*=(double d) {
    mpfr_mul_d(v_, v_, d, MPFR_RNDN);
    return *this;
  }
  BigFloat& operator/=(double d) {
    mpfr_div_d(v_, v_, d, MPFR_RNDN);
    return *this;
  }
  BigFloat& operator+=(double d) {
    mpfr_add_d(v_, v_, d, MPFR_RNDN);
    return *this;
  }
  BigFloat& operator-=(double d) {
    mpfr_sub_d(v_, v_, d, MPFR_RNDN);
    return *this;
  }

  // -- comparisons (false on NaN, as with doubles) --------------------------
  friend bool operator<(const BigFloat& a, const BigFloat& b) {
    return mpfr_less_p(a.v_, b.v_) != 0;
  }
  friend bool operator>(const BigFloat& a, const BigFloat& b) {
    return mpfr_greater_p(a.v_, b.v_) != 0;
  }
  friend bool operator<=(const BigFloat& a, const BigFloat& b) {
    return mpfr_lessequal_p(a.v_, b.v_) != 0;
  }
  friend bool operator>=(const BigFloat& a, const BigFloat& b) {
    return mpfr_greaterequal_p(a.v_, b.v_) != 0;
  }
  friend bool operator==(const BigFloat& a, const BigFloat& b) {
    return mpfr_equal_p(a.v_, b.v_) != 0;
  }
  friend bool operator!=(const BigFloat& a, const BigFloat& b) {
    return !(a == b);
  }
  friend bool operator<(const BigFloat& a, double d) {
    return mpfr_cmp_d(a.v_, d) < 0 && !a.is_nan();
  }
  friend bool operator>(const BigFloat& a, double d) {
    return !a.is_nan() && mpfr_cmp_d(a.v_, d) > 0;
  }
  friend bool operator<=(const BigFloat& a, double d) {
    return !a.is_nan() && mpfr_cmp_d(a.v_, d) <= 0;
  }
  friend bool operator>=(const BigFloat& a, double d) {
    return !a.is_nan() && mpfr_cmp_d(a.v_, d) >= 0;
  }
  friend bool operator==(const BigFloat& a, double d) {
    return !a.is_nan() && mpfr_cmp_d(a.v_, d) == 0;
  }

  // -- elementary functions --------------------------------------------------
  friend BigFloat abs(const BigFloat& a) {
    BigFloat r(a.bits());
    mpfr_abs(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat sqrt(const BigFloat& a) {
    BigFloat r(a.bits());
    mpfr_sqrt(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat exp(const BigFloat& a) {
    BigFloat r(a.bits());
    mpfr_exp(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat log(const BigFloat& a) {
    BigFloat r(a.bits());
    mpfr_log(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat sin(const BigFloat& a) {
    BigFloat r(a.bits());
    mpfr_sin(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat cos(const BigFloat& a) {
    BigFloat r(a.bits());
    mpfr_cos(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat atan2(const BigFloat& y, const BigFloat& x) {
    BigFloat r(maxp(y, x));
    mpfr_atan2(r.v_, y.v_, x.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat hypot(const BigFloat& x, const BigFloat& y) {
    BigFloat r(maxp(y, x));
    mpfr_hypot(r.v_, x.v_, y.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat ldexp(const BigFloat& a, long e) {
    BigFloat r(a.bits());
    mpfr_mul_2si(r.v_, a.v_, e, MPFR_RNDN);
    return r;
  }
  friend BigFloat floor(const BigFloat& a) {
    BigFloat r(a.bits());
    mpfr_floor(r.v_, a.v_);
    return r;
  }
  friend BigFloat round_nearest(const BigFloat& a) {
    BigFloat r(a.bits());
    mpfr_rint(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat max(const BigFloat& a, const BigFloat& b) {
    return a >= b ? a : b;
  }
  friend BigFloat min(const BigFloat& a, const BigFloat& b) {
    return a <= b ? a : b;
  }

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  static constexpr mpfr_prec_t kDefaultBits = 106;

 private:
  static mpfr_prec_t clamp(mpfr_prec_t p) {
    return p < MPFR_PREC_MIN ? MPFR_PREC_MIN : p;
  }
  static mpfr_prec_t maxp(const BigFloat& a, const BigFloat& b) {
    return mpfr_get_prec(a.v_) > mpfr_get_prec(b.v_) ? mpfr_get_prec(a.v_)
                                                     : mpfr_get_prec(b.v_);
  }
  void promote(mpfr_prec_t p) {
    if (mpfr_get_prec(v_) < p) {
      BigFloat t(p);
      mpfr_set(t.v_, v_, MPFR_RNDN);
      mpfr_swap(v_, t.v_);
    }
  }

  mpfr_t v_;
};

// Uniform access to double and BigFloat so the solvers can be written once.
template <class R>
struct Rt;

template <>
struct Rt<double> {
  static double make(double d, long) { return d; }
  static long bits(double) { return 53; }
  static double to_double(double x) { return x; }
  static bool finite(double x) { return std::isfinite(x); }
  // 2^e, flushed to 0/inf outside the double range.
  static double pow2(long e, long) { return std::ldexp(1.0, static_cast<int>(e)); }
  static double pi(long) { return 3.14159265358979323846264338327950288; }
  static long exponent(double x) {
    if (!std::isfinite(x) || x == 0.0) return std::numeric_limits<long>::min();
    int e = 0;
    std::frexp(x, &e);
    return e;
  }
  static double habs(double x) { return std::fabs(x); }
  static double hsqrt(double x) { return std::sqrt(x); }
  static double hexp(double x) { return std::exp(x); }
  static double hlog(double x) { return std::log(x); }
  static double hsin(double x) { return std::sin(x); }
  static double hcos(double x) { return std::cos(x); }
  static double hatan2(double y, double x) { return std::atan2(y, x); }
  static double hhypot(double x, double y) { return std::hypot(x, y); }
  static double hldexp(double x, long e) { return std::ldexp(x, static_cast<int>(e)); }
};

template <>
struct Rt<BigFloat> {
  static BigFloat make(double d, long bits) { return BigFloat(d, bits); }
  static long bits(const BigFloat& x) { return x.bits(); }
  static double to_double(const BigFloat& x) { return x.to_double(); }
  static bool finite(const BigFloat& x) { return x.is_finite(); }
  static BigFloat pow2(long e, long bits) { return BigFloat::pow2(e, bits); }
  static BigFloat pi(long bits) { return BigFloat::pi(bits); }
  static long exponent(const BigFloat& x) { return x.exponent(); }
  static BigFloat habs(const BigFloat& x) { return abs(x); }
  static BigFloat hsqrt(const BigFloat& x) { return sqrt(x); }
  static BigFloat hexp(const BigFloat& x) { return exp(x); }
  static BigFloat hlog(const BigFloat& x) { return log(x); }
  static BigFloat hsin(const BigFloat& x) { return sin(x); }
  static BigFloat hcos(const BigFloat& x) { return cos(x); }
  static BigFloat hatan2(const BigFloat& y, const BigFloat& x) { return atan2(y, x); }
  static BigFloat hhypot(const BigFloat& x, const BigFloat& y) { return hypot(x, y); }
  static BigFloat hldexp(const BigFloat& x, long e) { return ldexp(x, e); }
};

// Working precisions named by the configuration surface.
inline constexpr long kBitsDouble = 53;
inline constexpr long kBitsDd = 106;   // ~31 decimal digits
inline constexpr long kBitsQd = 212;   // ~63 decimal digits

}  // namespace thermobloch::num
