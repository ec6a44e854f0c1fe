// Copyright (c) thermobloch contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>

#include "thermobloch/assembly.hpp"
#include "thermobloch/charpoly.hpp"
#include "thermobloch/matexp.hpp"

namespace thermobloch::transfer {

using assembly::AbcMatrices;
using assembly::BoundaryMap;
using assembly::MnMatrices;
using materials::PhaseCoefficients;
using num::CharPoly;
using num::Cx;
using num::Matrix;
using num::Rt;

struct LayerSpec {
  PhaseCoefficients coefficients;
  double thickness = 0;  // [m]
};

struct CellSpec {
  std::vector<LayerSpec> layers;
  double period() const {
    double L = 0;
    for (const auto& l : layers) L += l.thickness;
    return L;
  }
  void validate() const {
    if (layers.empty()) throw std::invalid_argument("cell: at least one layer");
    for (const auto& l : layers)
      if (!(l.thickness >= 0))
        throw std::invalid_argument("cell: layer thickness must be >= 0");
    if (!(period() > 0)) throw std::invalid_argument("cell: period must be positive");
  }
};

enum class ExpMethod { automatic, eigen, series };

template <class R>
struct TransferOptions {
  long bits = num::kBitsDd;
  ExpMethod method = ExpMethod::automatic;
  num::ExpEigenOptions eig;
};

template <class R>
struct TransferMatrix {
  Matrix<R> T;
  Cx<R> det;               // via the exp-trace identity (see below)
  R det_residual;          // |det - 1|
  R palindromic_residual;  // filled for cell matrices, -1 otherwise
  R reciprocity_residual;  // filled by the Floquet solve, -1 otherwise
  std::optional<CharPoly<R>> charpoly;
  Cx<R> k1, k2, omega;
  long bits = 0;
  bool used_series = false;
};

// T_m = P exp(-M^-1 N l) P^-1 e^{i k2 l}.
//
// The determinant diagnostic is taken in log space: for the eigen route
// det(exp X) = exp(Σ ξ_i) over the computed eigenvalues, for the series
// route det(exp X) = exp(tr X). An LU determinant of the assembled matrix
// loses all digits once the diffusive modes grow beyond ~e^40 and would
// report conditioning, not symplecticity drift.
template <class R>
TransferMatrix<R> layer_transfer(const LayerSpec& layer, const Cx<R>& k1,
                                 const Cx<R>& k2, const Cx<R>& omega,
                                 const TransferOptions<R>& opt = {}) {
  const long bits = opt.bits;
  AbcMatrices<R> abc =
      assembly::build_abc_isotropic<R>(layer.coefficients, k1, k2, omega, bits);
  MnMatrices<R> mn = assembly::build_mn(abc);
  Matrix<R> x = mn.MinvN * (-layer.thickness);

  Matrix<R> expx(8, 8, bits);
  Cx<R> det_exp;
  bool used_series = false;
  auto series_path = [&]() {
    expx = num::exp_series(x);
    det_exp = exp(x.trace());
    used_series = true;
  };
  if (opt.method == ExpMethod::series) {
    series_path();
  } else {
    try {
      num::EigenSolution<R> sol;
      expx = num::exp_eigen(x, opt.eig, &sol);
      Cx<R> sum = Cx<R>::zero(bits);
      for (const auto& xi : sol.values) sum += xi;
      det_exp = exp(sum);
    } catch (const num::DegenerateEigenvalueError&) {
      if (opt.method == ExpMethod::eigen) throw;
      series_path();
    } catch (const num::IllConditionedEigenvectorsError&) {
      if (opt.method == ExpMethod::eigen) throw;
      series_path();
    } catch (const num::EigenConvergenceError&) {
      if (opt.method == ExpMethod::eigen) throw;
      series_path();
    }
  }

  BoundaryMap<R> bm =
      assembly::build_boundary_map<R>(layer.coefficients, k2, bits);
  Cx<R> iu = Cx<R>::make(0.0, 1.0, bits);
  Cx<R> phase = exp(iu * k2 * layer.thickness);
  TransferMatrix<R> tm{bm.P * expx * bm.Pinv * phase,
                       Cx<R>::zero(bits),
                       Rt<R>::make(0.0, bits),
                       Rt<R>::make(-1.0, bits),
                       Rt<R>::make(-1.0, bits),
                       std::nullopt,
                       k1,
                       k2,
                       omega,
                       bits,
                       used_series};
  Cx<R> ph2 = phase * phase;
  Cx<R> ph4 = ph2 * ph2;
  tm.det = det_exp * ph4 * ph4;
  tm.det_residual = abs(tm.det - Cx<R>::one(bits));
  return tm;
}

// Cell transfer: product of layer matrices with layer n applied last.
// Perfect bonding makes the interface condition a plain multiplication.
template <class R>
TransferMatrix<R> cell_transfer(const CellSpec& cell, const Cx<R>& k1,
                                const Cx<R>& k2, const Cx<R>& omega,
                                const TransferOptions<R>& opt = {}) {
  cell.validate();
  const long bits = opt.bits;
  TransferMatrix<R> acc = layer_transfer(cell.layers.front(), k1, k2, omega, opt);
  for (size_t m = 1; m < cell.layers.size(); ++m) {
    TransferMatrix<R> lm = layer_transfer(cell.layers[m], k1, k2, omega, opt);
    acc.T = lm.T * acc.T;
    acc.det = lm.det * acc.det;
    acc.used_series = acc.used_series || lm.used_series;
  }
  acc.det_residual = abs(acc.det - Cx<R>::one(bits));
  acc.charpoly = num::faddeev_leverrier(acc.T);
  acc.palindromic_residual = acc.charpoly->palindromic_residual();
  return acc;
}

// ---------------------------------------------------------------------------
// power-series transfer matrices

enum class PolyVar { k1, omega };

struct SeriesDivergedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class R>
struct PolyMatrix {
  PolyVar var = PolyVar::k1;
  std::vector<Matrix<R>> c;  // coefficient of x^m at index m
  bool converged = true;
  R tail_bound;
  int order() const { return static_cast<int>(c.size()) - 1; }

  Matrix<R> evaluate(const Cx<R>& x) const {
    Matrix<R> acc = c.back();
    for (int m = order() - 1; m >= 0; --m) acc = acc * x + c[static_cast<size_t>(m)];
    return acc;
  }
};

struct SeriesOptions {
  long bits = num::kBitsDd;
  double eval_radius = 1.0;  // tail bound is quoted at this |x|
  double tol = 1e-12;
  int taylor_cap = 60;
};

namespace detail {

template <class R>
PolyMatrix<R> poly_multiply_truncate_impl(const PolyMatrix<R>& a,
                                          const PolyMatrix<R>& b, int order) {
  if (a.var != b.var)
    throw std::invalid_argument("poly_multiply: variable mismatch");
  const long bits = a.c[0].bits();
  const int n = a.c[0].rows();
  PolyMatrix<R> r;
  r.var = a.var;
  r.tail_bound = Rt<R>::make(0.0, bits);
  r.converged = a.converged && b.converged;
  r.c.assign(static_cast<size_t>(order) + 1, Matrix<R>(n, n, bits));
  for (int i = 0; i < static_cast<int>(a.c.size()); ++i) {
    if (i > order) break;
    for (int j = 0; j < static_cast<int>(b.c.size()); ++j) {
      if (i + j > order) break;
      r.c[static_cast<size_t>(i + j)] += a.c[static_cast<size_t>(i)] *
                                         b.c[static_cast<size_t>(j)];
    }
  }
  return r;
}

template <class R>
R poly_norm_at_radius(const PolyMatrix<R>& p, const R& radius) {
  const long bits = p.c[0].bits();
  R acc = Rt<R>::make(0.0, bits);
  R rp = Rt<R>::make(1.0, bits);
  for (const auto& cm : p.c) {
    acc += cm.norm1() * rp;
    rp *= radius;
  }
  return acc;
}

// exp(H0 + x H1 + x^2 H2) truncated at `order` in x, via scaling and
// squaring on polynomial matrices. Truncating the Cauchy products commutes
// with squaring, so the result is the exact degree-`order` Taylor polynomial
// of the exponential up to roundoff and the Taylor-index tail.
template <class R>
PolyMatrix<R> poly_exp(PolyVar var, Matrix<R> h0, Matrix<R> h1, Matrix<R> h2,
                       int order, const SeriesOptions& opt) {
  const long bits = h0.bits();
  const int n = h0.rows();
  const R radius = Rt<R>::make(opt.eval_radius, bits);
  R nrm = h0.norm1() + h1.norm1() * radius + h2.norm1() * radius * radius;
  long s = 0;
  if (nrm > 0.5) {
    s = Rt<R>::exponent(nrm) + 1;
    if (s < 0) s = 0;
  }
  auto scale_matrix = [&](Matrix<R>& m) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        m(i, j) = {Rt<R>::hldexp(m(i, j).re, -s), Rt<R>::hldexp(m(i, j).im, -s)};
  };
  if (s > 0) {
    scale_matrix(h0);
    scale_matrix(h1);
    scale_matrix(h2);
  }
  PolyMatrix<R> arg;
  arg.var = var;
  arg.tail_bound = Rt<R>::make(0.0, bits);
  arg.c = {std::move(h0)};
  if (order >= 1) arg.c.push_back(std::move(h1));
  if (order >= 2) arg.c.push_back(std::move(h2));

  PolyMatrix<R> acc;
  acc.var = var;
  acc.tail_bound = Rt<R>::make(0.0, bits);
  acc.c.assign(static_cast<size_t>(order) + 1, Matrix<R>(n, n, bits));
  acc.c[0] = Matrix<R>::identity(n, bits);
  PolyMatrix<R> term = acc;

  R scaled_norm = poly_norm_at_radius(arg, radius);
  bool ok = false;
  R tail = Rt<R>::make(0.0, bits);
  for (int k = 1; k <= opt.taylor_cap; ++k) {
    term = poly_multiply_truncate_impl(term, arg, order);
    Cx<R> recip(Rt<R>::make(1.0, bits) / static_cast<double>(k));
    for (auto& cm : term.c) cm = cm * recip;
    for (size_t m = 0; m < acc.c.size(); ++m) acc.c[m] += term.c[m];
    R tn = poly_norm_at_radius(term, radius);
    R an = poly_norm_at_radius(acc, radius);
    // geometric tail estimate for the remaining Taylor indices
    R theta = scaled_norm / static_cast<double>(k + 1);
    if (theta < 0.5) {
      tail = tn * theta / (1.0 - theta);
      if (tail <= an * opt.tol) {
        ok = true;
        break;
      }
    }
  }
  acc.converged = ok;
  acc.tail_bound = tail;
  for (long q = 0; q < s; ++q) acc = poly_multiply_truncate_impl(acc, acc, order);
  return acc;
}

template <class R>
PolyMatrix<R> series_transfer(const LayerSpec& layer, PolyVar var,
                              const Cx<R>& k1_fixed, const Cx<R>& k2,
                              const Cx<R>& omega_fixed, int order,
                              const SeriesOptions& opt) {
  if (order < 0) throw std::invalid_argument("series_transfer: order >= 0");
  const long bits = opt.bits;
  auto gen = [&](double xval) {
    Cx<R> xv = Cx<R>::make(xval, 0.0, bits);
    const Cx<R>& k1 = var == PolyVar::k1 ? xv : k1_fixed;
    const Cx<R>& om = var == PolyVar::omega ? xv : omega_fixed;
    AbcMatrices<R> abc =
        assembly::build_abc_isotropic<R>(layer.coefficients, k1, k2, om, bits);
    return assembly::build_mn(abc).MinvN * (-layer.thickness);
  };
  // the generator is exactly quadratic in either variable
  Matrix<R> x0 = gen(0.0), xp = gen(1.0), xm = gen(-1.0);
  Matrix<R> h1 = (xp - xm) * 0.5;
  Matrix<R> h2 = (xp + xm) * 0.5 - x0;
  PolyMatrix<R> e = poly_exp(var, std::move(x0), std::move(h1), std::move(h2),
                             order, opt);
  BoundaryMap<R> bm =
      assembly::build_boundary_map<R>(layer.coefficients, k2, bits);
  Cx<R> iu = Cx<R>::make(0.0, 1.0, bits);
  Cx<R> phase = exp(iu * k2 * layer.thickness);
  for (auto& cm : e.c) cm = bm.P * cm * bm.Pinv * phase;
  return e;
}

}  // namespace detail

template <class R>
PolyMatrix<R> series_transfer_k1(const LayerSpec& layer, const Cx<R>& k2,
                                 const Cx<R>& omega, int order,
                                 const SeriesOptions& opt = {}) {
  return detail::series_transfer(layer, PolyVar::k1, Cx<R>::zero(opt.bits), k2,
                                 omega, order, opt);
}

template <class R>
PolyMatrix<R> series_transfer_omega(const LayerSpec& layer, const Cx<R>& k1,
                                    const Cx<R>& k2, int order,
                                    const SeriesOptions& opt = {}) {
  return detail::series_transfer(layer, PolyVar::omega, k1, k2,
                                 Cx<R>::zero(opt.bits), order, opt);
}

template <class R>
PolyMatrix<R> poly_multiply_truncate(const PolyMatrix<R>& a,
                                     const PolyMatrix<R>& b, int order) {
  return detail::poly_multiply_truncate_impl(a, b, order);
}

// ---------------------------------------------------------------------------
// diagnostics

// Generalized amplitude matrix Ω of the eigen-expansion route: given the
// eigenvector matrix Γ of M^-1 N (columns γ with γ^{(1..4)} = w' and
// γ^{(5..8)} = w) it maps mode amplitudes to (w, t). Used to cross-validate
// the boundary-map route; coincides with P Γ at k1 = 0.
template <class R>
Matrix<R> amplitude_matrix(const PhaseCoefficients& c, const Matrix<R>& gamma,
                           const Cx<R>& k1, const Cx<R>& k2) {
  const long bits = gamma.bits();
  const Cx<R> iu = Cx<R>::make(0.0, 1.0, bits);
  Matrix<R> om(8, 8, bits);
  for (int j = 0; j < 8; ++j) {
    om(0, j) = gamma(4, j);
    om(1, j) = gamma(5, j);
    om(2, j) = gamma(6, j);
    om(3, j) = gamma(7, j);
    om(4, j) = (gamma(0, j) + iu * k1 * gamma(5, j) + iu * k2 * gamma(4, j)) *
               c.c1212();
    om(5, j) = gamma(1, j) * c.c2222() + iu * k1 * gamma(4, j) * c.c1122() +
               iu * k2 * gamma(5, j) * c.c2222() - gamma(6, j) * c.alpha -
               gamma(7, j) * c.beta;
    om(6, j) = -((gamma(2, j) + iu * k2 * gamma(6, j)) * c.K);
    om(7, j) = -((gamma(3, j) + iu * k2 * gamma(7, j)) * c.D);
  }
  return om;
}

// Relative disagreement between the cell transfer evaluated at two values of
// k2 (it must not depend on k2 for fixed k1).
template <class R>
R k2_independence_residual(const CellSpec& cell, const Cx<R>& k1,
                           const Cx<R>& omega, const TransferOptions<R>& opt,
                           const Cx<R>& k2a, const Cx<R>& k2b) {
  TransferMatrix<R> ta = cell_transfer(cell, k1, k2a, omega, opt);
  TransferMatrix<R> tb = cell_transfer(cell, k1, k2b, omega, opt);
  R denom = ta.T.norm1();
  if (denom == 0.0) denom = Rt<R>::make(1.0, opt.bits);
  return (ta.T - tb.T).norm1() / denom;
}

// Predicted attenuation depth in nepers across one cell: the thermal and
// diffusive penetration factors sqrt(|ω| p / 2K) and sqrt(|ω| q / 2D) per
// layer. Drives the adaptive precision choice.
inline double attenuation_nepers(const CellSpec& cell, double omega_abs) {
  double total = 0;
  for (const auto& l : cell.layers) {
    const auto& c = l.coefficients;
    total += l.thickness * (std::sqrt(omega_abs * c.p / (2.0 * c.K)) +
                            std::sqrt(omega_abs * c.q / (2.0 * c.D)));
  }
  return total;
}

}  // namespace thermobloch::transfer
