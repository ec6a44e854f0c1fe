// Copyright (c) thermobloch contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <utility>

#include "thermobloch/matrix.hpp"

namespace thermobloch::num {

struct NonPalindromicError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Characteristic polynomial det(λI - T) written as Σ c_k λ^k with c_n = 1,
// together with the auxiliary matrices of the trace recursion.
template <class R>
struct CharPoly {
  std::vector<Cx<R>> c;             // degree n, c[n] = 1
  std::vector<Matrix<R>> aux;       // M_1 .. M_n of the recursion
  int degree() const { return static_cast<int>(c.size()) - 1; }

  R max_coeff() const {
    long bits = c.empty() ? kBitsDd : c[0].bits();
    R best = Rt<R>::make(0.0, bits);
    for (const auto& e : c) {
      R m = abs1(e);
      if (m > best) best = m;
    }
    return best;
  }

  // max(|c_n - c_0|, |c_{n-1} - c_1|, ...) / max|c_k|
  R palindromic_residual() const {
    const int n = degree();
    long bits = c[0].bits();
    R worst = Rt<R>::make(0.0, bits);
    for (int j = 0; 2 * j <= n; ++j) {
      R d = abs1(c[static_cast<size_t>(n - j)] - c[static_cast<size_t>(j)]);
      if (d > worst) worst = d;
    }
    R scale = max_coeff();
    if (scale == 0.0) return worst;
    return worst / scale;
  }
};

// Faddeev-LeVerrier trace recursion: M_k = T M_{k-1} + c_{n-k+1} I,
// c_{n-k} = -tr(T M_k)/k. Also yields the determinant as (-1)^n c_0.
template <class R>
CharPoly<R> faddeev_leverrier(const Matrix<R>& t_in, bool keep_aux = false) {
  const int n = t_in.rows();
  const long bits = t_in.bits();
  if (n != t_in.cols() || n < 1 || n > 8)
    throw std::invalid_argument("faddeev_leverrier: square matrix of order <= 8");
  // The coefficients are similarity invariants; balancing first keeps the
  // recursion's intermediates near the spectral radius instead of the raw
  // operator norm of a dimensionally graded matrix.
  Matrix<R> t = t_in;
  balance_in_place(t);
  CharPoly<R> p;
  p.c.assign(static_cast<size_t>(n) + 1, Cx<R>::zero(bits));
  p.c[static_cast<size_t>(n)] = Cx<R>::one(bits);
  Matrix<R> mk(n, n, bits);  // M_0 = 0
  for (int k = 1; k <= n; ++k) {
    Matrix<R> tm = t * mk;
    for (int i = 0; i < n; ++i) tm(i, i) += p.c[static_cast<size_t>(n - k + 1)];
    mk = std::move(tm);  // M_k
    Matrix<R> prod = t * mk;
    // divide by k exactly in working precision; a double-rounded 1/k seeds a
    // relative error that the recursion amplifies by ~λmax per step
    p.c[static_cast<size_t>(n - k)] =
        -(prod.trace() / Rt<R>::make(static_cast<double>(k), bits));
    if (keep_aux) p.aux.push_back(mk);
  }
  return p;
}

// Coefficients (monic) of the half-degree polynomial in z = λ + 1/λ obtained
// from a degree-8 palindromic characteristic polynomial:
//   z^4 + C1 z^3 + (C2 - 4) z^2 + (C3 - 3 C1) z + (C4 - 2 C2 + 2).
template <class R>
std::array<Cx<R>, 5> palindromic_reduce(const CharPoly<R>& p, const R& tol) {
  if (p.degree() != 8)
    throw std::invalid_argument("palindromic_reduce: degree-8 polynomial required");
  R res = p.palindromic_residual();
  if (!(res <= tol))
    throw NonPalindromicError("palindromic structure lost: residual " +
                              std::to_string(Rt<R>::to_double(res)));
  const long bits = p.c[0].bits();
  const Cx<R>& c1 = p.c[7];
  const Cx<R>& c2 = p.c[6];
  const Cx<R>& c3 = p.c[5];
  const Cx<R>& c4 = p.c[4];
  std::array<Cx<R>, 5> q = {Cx<R>::one(bits), c1, c2 - Cx<R>::make(4.0, 0.0, bits),
                            c3 - c1 * 3.0,
                            c4 - c2 * 2.0 + Cx<R>::make(2.0, 0.0, bits)};
  return q;
}

namespace detail {

// Roots of monic y^2 + b y + c, cancellation-safe.
template <class R>
std::pair<Cx<R>, Cx<R>> quadratic_roots(const Cx<R>& b, const Cx<R>& c) {
  const long bits = b.bits();
  Cx<R> disc = sqrt(b * b - c * 4.0);
  // pick the sign that adds constructively to b
  Cx<R> q1 = b + disc, q2 = b - disc;
  Cx<R> big = abs1(q1) >= abs1(q2) ? q1 : q2;
  if (abs1(big) == 0.0) return {Cx<R>::zero(bits), Cx<R>::zero(bits)};
  Cx<R> y1 = -(big * 0.5);
  Cx<R> y2 = c / y1;
  return {y1, y2};
}

// One cube root of t^3 + a t^2 + b t + c = 0 (Cardano, principal branch).
// The fractional constants are formed at working precision: double-rounded
// seeds get amplified by the full dynamic range of the root spread.
template <class R>
Cx<R> cubic_one_root(const Cx<R>& a, const Cx<R>& b, const Cx<R>& c) {
  const long bits = a.bits();
  const R third = Rt<R>::make(1.0, bits) / 3.0;
  const R ninth = third * third;
  Cx<R> p = b - a * a * third;
  Cx<R> q = c + (a * a * a * (ninth * third * 2.0)) - a * b * third;
  Cx<R> disc = sqrt(q * q * 0.25 + p * p * p * (ninth * third));
  Cx<R> u1 = q * (-0.5) + disc;
  Cx<R> u2 = q * (-0.5) - disc;
  Cx<R> u = abs1(u1) >= abs1(u2) ? u1 : u2;
  Cx<R> t;
  if (abs1(u) == 0.0) {
    t = Cx<R>::zero(bits);
  } else {
    Cx<R> w = cbrt(u);
    t = w - p / (w * 3.0);
  }
  return t - a * third;
}

}  // namespace detail

// Ferrari closed form for a monic quartic, each root polished with a single
// Newton step at working precision.
template <class R>
std::array<Cx<R>, 4> solve_quartic(const std::array<Cx<R>, 5>& coeff) {
  const Cx<R>& a = coeff[1];
  const Cx<R>& b = coeff[2];
  const Cx<R>& c = coeff[3];
  const Cx<R>& d = coeff[4];
  // depressed quartic y^4 + p y^2 + q y + r with z = y - a/4
  Cx<R> a2 = a * a;
  Cx<R> p = b - a2 * (3.0 / 8.0);
  Cx<R> q = c - a * b * 0.5 + a2 * a * 0.125;
  Cx<R> r = d - a * c * 0.25 + a2 * b * (1.0 / 16.0) - a2 * a2 * (3.0 / 256.0);
  std::array<Cx<R>, 4> y;
  if (abs1(q) == 0.0) {
    // biquadratic
    auto [u1, u2] = detail::quadratic_roots(p, r);
    Cx<R> s1 = sqrt(u1), s2 = sqrt(u2);
    y = {s1, -s1, s2, -s2};
  } else {
    // resolvent 8m^3 + 8pm^2 + (2p^2 - 8r)m - q^2 = 0
    Cx<R> ca = p;
    Cx<R> cb = (p * p - r * 4.0) * 0.25;
    Cx<R> cc = -(q * q) * 0.125;
    Cx<R> m = detail::cubic_one_root(ca, cb, cc);
    Cx<R> s = sqrt(m * 2.0);
    if (abs1(s) == 0.0) {
      auto [u1, u2] = detail::quadratic_roots(p, r);
      Cx<R> s1 = sqrt(u1), s2 = sqrt(u2);
      y = {s1, -s1, s2, -s2};
    } else {
      Cx<R> t = q / (s * 2.0);
      Cx<R> half_p = p * 0.5;
      // y^2 - s y + (p/2 + m + t) and y^2 + s y + (p/2 + m - t)
      auto [y1, y2] = detail::quadratic_roots(-s, half_p + m + t);
      auto [y3, y4] = detail::quadratic_roots(s, half_p + m - t);
      y = {y1, y2, y3, y4};
    }
  }
  std::array<Cx<R>, 4> z;
  Cx<R> shift = a * 0.25;
  for (int k = 0; k < 4; ++k) z[k] = y[k] - shift;
  // one Newton step on the original quartic removes closed-form cancellation
  for (auto& zk : z) {
    Cx<R> f = ((( zk + a) * zk + b) * zk + c) * zk + d;
    Cx<R> df = ((zk * 4.0 + a * 3.0) * zk + b * 2.0) * zk + c;
    if (abs1(df) > 0.0) zk -= f / df;
  }
  return z;
}

// Both roots of λ^2 - z λ + 1 = 0; their product is 1 by construction since
// the second is computed as the reciprocal of the first.
template <class R>
std::pair<Cx<R>, Cx<R>> z_to_lambda(const Cx<R>& z) {
  const long bits = z.bits();
  Cx<R> s = sqrt(z * z - Cx<R>::make(4.0, 0.0, bits));
  Cx<R> p1 = z + s, p2 = z - s;
  Cx<R> big = abs1(p1) >= abs1(p2) ? p1 : p2;
  if (abs1(big) == 0.0) {
    // z = ±2i ... cannot happen with big==0 unless z=0 and s=∓2i; then λ=±i
    Cx<R> lam = Cx<R>::make(0.0, 1.0, bits);
    return {lam, Cx<R>::one(bits) / lam};
  }
  Cx<R> lam = big * 0.5;
  return {lam, Cx<R>::one(bits) / lam};
}

}  // namespace thermobloch::num
