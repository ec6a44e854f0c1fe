// Copyright (c) thermobloch contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "thermobloch/matrix.hpp"

namespace thermobloch::num {

struct EigenConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class R>
struct EigenSolution {
  std::vector<Cx<R>> values;          // sorted: |λ| descending, then arg
  Matrix<R> vectors;                  // unit 2-norm columns, same order
  std::vector<R> residuals;           // ||T v - λ v||_2 per pair
  R vector_cond;                      // ||Γ||_1 ||Γ^-1||_1 when computed, else 0
};

namespace detail {

// Householder reduction to upper Hessenberg form (values only).
template <class R>
void hessenberg(Matrix<R>& a) {
  const int n = a.rows();
  const long bits = a.bits();
  for (int k = 0; k < n - 2; ++k) {
    R scale = Rt<R>::make(0.0, bits);
    for (int i = k + 1; i < n; ++i) scale += abs1(a(i, k));
    if (scale == 0.0) continue;
    std::vector<Cx<R>> v(n, Cx<R>::zero(bits));
    R nrm2 = Rt<R>::make(0.0, bits);
    for (int i = k + 1; i < n; ++i) {
      v[i] = a(i, k) / scale;
      nrm2 += norm(v[i]);
    }
    R alpha = Rt<R>::hsqrt(nrm2);
    if (alpha == 0.0) continue;
    // reflect onto -sign(v_k+1) * alpha * e1
    Cx<R> phase = Cx<R>::one(bits);
    R m0 = abs(v[k + 1]);
    if (m0 > 0.0) phase = v[k + 1] / m0;
    Cx<R> ve = phase * alpha;
    v[k + 1] += ve;
    R vnorm2 = Rt<R>::make(0.0, bits);
    for (int i = k + 1; i < n; ++i) vnorm2 += norm(v[i]);
    if (vnorm2 == 0.0) continue;
    // A <- (I - 2 v v^H / ||v||^2) A (I - 2 v v^H / ||v||^2)
    for (int j = 0; j < n; ++j) {  // left
      Cx<R> dot = Cx<R>::zero(bits);
      for (int i = k + 1; i < n; ++i) dot += conj(v[i]) * a(i, j);
      dot = dot * (2.0 / vnorm2);
      for (int i = k + 1; i < n; ++i) a(i, j) -= v[i] * dot;
    }
    for (int i = 0; i < n; ++i) {  // right
      Cx<R> dot = Cx<R>::zero(bits);
      for (int j = k + 1; j < n; ++j) dot += a(i, j) * v[j];
      dot = dot * (2.0 / vnorm2);
      for (int j = k + 1; j < n; ++j) a(i, j) -= dot * conj(v[j]);
    }
    for (int i = k + 2; i < n; ++i) a(i, k) = Cx<R>::zero(bits);
  }
}

template <class R>
struct Givens {
  R c;      // real
  Cx<R> s;  // complex
};

// Rotation with G [f; g] = [r; 0].
template <class R>
Givens<R> make_givens(const Cx<R>& f, const Cx<R>& g, long bits) {
  R gf = abs(f), gg = abs(g);
  if (gg == 0.0) return {Rt<R>::make(1.0, bits), Cx<R>::zero(bits)};
  if (gf == 0.0) return {Rt<R>::make(0.0, bits), Cx<R>::one(bits)};
  R d = Rt<R>::hhypot(gf, gg);
  Cx<R> fu = f / gf;
  return {gf / d, fu * conj(g) * (1.0 / d)};
}

// Eigenvalues of [[a,b],[c,d]]; returns the root closer to d first.
template <class R>
std::pair<Cx<R>, Cx<R>> wilkinson(const Cx<R>& a, const Cx<R>& b, const Cx<R>& c,
                                  const Cx<R>& d) {
  Cx<R> tr2 = (a + d) * 0.5;
  Cx<R> det = a * d - b * c;
  Cx<R> disc = sqrt(tr2 * tr2 - det);
  Cx<R> l1 = tr2 + disc, l2 = tr2 - disc;
  if (abs1(l1 - d) <= abs1(l2 - d)) return {l1, l2};
  return {l2, l1};
}

}  // namespace detail

// Eigenvalues of a square complex matrix via balancing, Householder
// Hessenberg reduction and single-shift QR with deflation.
template <class R>
std::vector<Cx<R>> eigenvalues(Matrix<R> a, int max_sweeps_per_eig = 60) {
  const int n = a.rows();
  const long bits = a.bits();
  if (n != a.cols()) throw std::invalid_argument("eigenvalues: square input required");
  if (!a.all_finite())
    throw std::invalid_argument("eigenvalues: non-finite entries");
  std::vector<Cx<R>> out;
  out.reserve(n);
  if (n == 1) {
    out.push_back(a(0, 0));
    return out;
  }
  balance_in_place(a);
  detail::hessenberg(a);
  const R epsr = Rt<R>::pow2(-(bits - 2), bits);

  int hi = n - 1;
  long total_iter = 0;
  const long iter_cap = static_cast<long>(max_sweeps_per_eig) * n;
  while (hi >= 0) {
    // find the active block [lo..hi]
    int lo = hi;
    while (lo > 0) {
      R sub = abs1(a(lo, lo - 1));
      R diag = abs1(a(lo - 1, lo - 1)) + abs1(a(lo, lo));
      if (sub <= epsr * diag) {
        a(lo, lo - 1) = Cx<R>::zero(bits);
        break;
      }
      --lo;
    }
    if (lo == hi) {
      out.push_back(a(hi, hi));
      --hi;
      continue;
    }
    if (lo == hi - 1) {
      auto [l1, l2] = detail::wilkinson(a(lo, lo), a(lo, hi), a(hi, lo), a(hi, hi));
      out.push_back(l1);
      out.push_back(l2);
      hi = lo - 1;
      continue;
    }
    if (++total_iter > iter_cap) {
      throw EigenConvergenceError(
          "qr eigenvalue iteration exceeded cap; subdiagonal stagnated (norm1="
          + std::to_string(Rt<R>::to_double(a.norm1())) + ")");
    }
    Cx<R> shift;
    if (total_iter % 13 == 0) {
      // exceptional shift breaks symmetric stagnation
      shift = a(hi, hi) + Cx<R>(abs1(a(hi, hi - 1)), Rt<R>::make(0.0, bits));
    } else {
      shift = detail::wilkinson(a(hi - 1, hi - 1), a(hi - 1, hi), a(hi, hi - 1),
                                a(hi, hi)).first;
    }
    // implicit single-shift bulge chase on [lo..hi]
    Cx<R> x = a(lo, lo) - shift;
    Cx<R> y = a(lo + 1, lo);
    for (int k = lo; k < hi; ++k) {
      auto g = detail::make_givens(x, y, bits);
      int r0 = k > lo ? k - 1 : lo;
      for (int j = r0; j <= hi; ++j) {  // rows k, k+1
        Cx<R> t1 = a(k, j), t2 = a(k + 1, j);
        a(k, j) = t1 * g.c + g.s * t2;
        a(k + 1, j) = t2 * g.c - conj(g.s) * t1;
      }
      int r1 = std::min(hi, k + 2);
      for (int i = lo; i <= r1; ++i) {  // cols k, k+1
        Cx<R> t1 = a(i, k), t2 = a(i, k + 1);
        a(i, k) = t1 * g.c + conj(g.s) * t2;
        a(i, k + 1) = t2 * g.c - g.s * t1;
      }
      if (k < hi - 1) {
        x = a(k + 1, k);
        y = a(k + 2, k);
      }
    }
  }
  // deterministic order: |λ| descending, phase ascending as tie break
  std::sort(out.begin(), out.end(), [](const Cx<R>& u, const Cx<R>& v) {
    R au = abs(u), av = abs(v);
    if (au > av) return true;
    if (au < av) return false;
    R pu = arg(u), pv = arg(v);
    if (pu < pv) return true;
    if (pu > pv) return false;
    return false;
  });
  return out;
}

// One-or-two-step inverse iteration for the eigenvector of a given value.
template <class R>
std::vector<Cx<R>> inverse_iteration(const Matrix<R>& t, const Cx<R>& lambda,
                                     int steps = 2) {
  const int n = t.rows();
  const long bits = t.bits();
  R tnorm = t.norm1();
  if (tnorm == 0.0) tnorm = Rt<R>::make(1.0, bits);
  R jig = Rt<R>::pow2(-(2 * bits / 3), bits);
  for (int attempt = 0;; ++attempt) {
    Matrix<R> s = t;
    Cx<R> mu = lambda;
    if (attempt > 0) {
      R bump = jig * tnorm * static_cast<double>(attempt);
      mu = lambda + Cx<R>(bump, bump);
    }
    for (int i = 0; i < n; ++i) s(i, i) -= mu;
    Lu<R> lu(std::move(s));
    if (lu.singular() && attempt < 4) continue;
    std::vector<Cx<R>> v(n, Cx<R>::zero(bits));
    for (int i = 0; i < n; ++i)
      v[i] = Cx<R>::make(1.0 / (1.0 + i), 0.5 / (2.0 + i), bits);
    try {
      for (int s2 = 0; s2 < steps; ++s2) {
        v = lu.solve(std::move(v));
        R nv = Rt<R>::make(0.0, bits);
        for (auto& e : v) nv += norm(e);
        nv = Rt<R>::hsqrt(nv);
        if (nv == 0.0) break;
        for (auto& e : v) e = e / nv;
      }
    } catch (const SingularMatrixError&) {
      if (attempt < 4) continue;
      throw;
    }
    return v;
  }
}

template <class R>
R eig_residual(const Matrix<R>& t, const Cx<R>& lambda,
               const std::vector<Cx<R>>& v) {
  const int n = t.rows();
  const long bits = t.bits();
  R acc = Rt<R>::make(0.0, bits);
  for (int i = 0; i < n; ++i) {
    Cx<R> r = Cx<R>::zero(bits);
    for (int j = 0; j < n; ++j) r += t(i, j) * v[j];
    r -= lambda * v[i];
    acc += norm(r);
  }
  return Rt<R>::hsqrt(acc);
}

// Full decomposition: values plus inverse-iteration eigenvectors.
template <class R>
EigenSolution<R> eigen_decompose(const Matrix<R>& t) {
  const int n = t.rows();
  const long bits = t.bits();
  EigenSolution<R> sol;
  sol.values = eigenvalues<R>(t);
  sol.vectors = Matrix<R>(n, n, bits);
  sol.residuals.reserve(n);
  for (int k = 0; k < n; ++k) {
    auto v = inverse_iteration(t, sol.values[k]);
    for (int i = 0; i < n; ++i) sol.vectors(i, k) = v[i];
    sol.residuals.push_back(eig_residual(t, sol.values[k], v));
  }
  sol.vector_cond = Rt<R>::make(0.0, bits);
  return sol;
}

}  // namespace thermobloch::num
