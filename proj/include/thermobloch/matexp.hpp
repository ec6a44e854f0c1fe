// Copyright (c) thermobloch contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "thermobloch/eigen.hpp"

namespace thermobloch::num {

struct DegenerateEigenvalueError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IllConditionedEigenvectorsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// exp(F) by scaled Taylor summation and repeated squaring. Truncation stops
// once the running term drops below the unit roundoff of the working
// precision relative to the accumulated sum.
template <class R>
Matrix<R> exp_series(const Matrix<R>& f) {
  const int n = f.rows();
  const long bits = f.bits();
  R nrm = f.norm1();
  long s = 0;
  if (nrm > 0.5) {
    // 2^s >= 2*nrm  =>  scaled norm <= 0.5
    s = Rt<R>::exponent(nrm) + 1;
    if (s < 0) s = 0;
  }
  Matrix<R> g = f;
  if (s > 0) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        g(i, j) = {Rt<R>::hldexp(g(i, j).re, -s), Rt<R>::hldexp(g(i, j).im, -s)};
  }
  Matrix<R> acc = Matrix<R>::identity(n, bits);
  Matrix<R> term = Matrix<R>::identity(n, bits);
  const R tiny = Rt<R>::pow2(-(bits + 8), bits);
  const long term_cap = 4 * bits + 64;
  for (long k = 1; k <= term_cap; ++k) {
    term = term * g;
    // reciprocal at working precision; a double-rounded 1/k caps the
    // attainable accuracy at ~1e-17 relative
    Cx<R> recip(Rt<R>::make(1.0, bits) / static_cast<double>(k));
    term = term * recip;
    acc += term;
    R tn = term.norm1();
    R an = acc.norm1();
    if (tn <= tiny * (an + 1.0)) break;
  }
  for (long k = 0; k < s; ++k) acc = acc * acc;
  return acc;
}

struct ExpEigenOptions {
  // modes closer than gap_factor * spectral radius count as degenerate
  double gap_factor = 1e-8;
  double cond_cap = 1e12;
};

// exp(F) = Γ diag(e^{ς_i}) Γ^{-1} from the eigendecomposition. Throws
// DegenerateEigenvalueError when the spectrum has (near-)repeated values;
// callers fall back to exp_series.
template <class R>
Matrix<R> exp_eigen(const Matrix<R>& f, const ExpEigenOptions& opt = {},
                    EigenSolution<R>* solution_out = nullptr) {
  const int n = f.rows();
  const long bits = f.bits();
  EigenSolution<R> eig = eigen_decompose(f);
  R rad = Rt<R>::make(0.0, bits);
  for (const auto& v : eig.values) {
    R m = abs(v);
    if (m > rad) rad = m;
  }
  R gap_tol = rad * opt.gap_factor;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (abs(eig.values[i] - eig.values[j]) < gap_tol)
        throw DegenerateEigenvalueError(
            "exp_eigen: eigenvalue gap below threshold; use the series form");
    }
  Lu<R> lu(eig.vectors);
  if (lu.singular())
    throw IllConditionedEigenvectorsError("exp_eigen: eigenvector matrix singular");
  Matrix<R> gamma_inv = lu.inverse();
  eig.vector_cond = eig.vectors.norm1() * gamma_inv.norm1();
  if (eig.vector_cond > Rt<R>::make(opt.cond_cap, bits))
    throw IllConditionedEigenvectorsError(
        "exp_eigen: eigenvector condition estimate above cap");
  Matrix<R> scaled(n, n, bits);
  for (int j = 0; j < n; ++j) {
    Cx<R> e = exp(eig.values[j]);
    for (int i = 0; i < n; ++i) scaled(i, j) = eig.vectors(i, j) * e;
  }
  if (solution_out) *solution_out = eig;
  return scaled * gamma_inv;
}

}  // namespace thermobloch::num
