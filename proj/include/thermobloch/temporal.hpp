// Copyright (c) thermobloch contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "thermobloch/sweep.hpp"

namespace thermobloch::spectrum {

// Dispersion determinant D(k, ω) = det(T - e^{i k2 L} I); all arguments may
// be complex. Useful for external root finding and for verifying reported
// roots, scaled residuals |D| / (||T||_1 + |λ|)^8.
template <class R>
Cx<R> dispersion_residual(const CellSpec& cell, const Cx<R>& k1,
                          const Cx<R>& k2, const Cx<R>& omega,
                          const TransferOptions<R>& opt = {}) {
  TransferMatrix<R> tm = transfer::cell_transfer(cell, k1, k2, omega, opt);
  const long bits = opt.bits;
  Cx<R> iu = Cx<R>::make(0.0, 1.0, bits);
  Cx<R> lambda = exp(iu * k2 * cell.period());
  Matrix<R> m = tm.T;
  for (int i = 0; i < 8; ++i) m(i, i) -= lambda;
  num::Lu<R> lu(std::move(m));
  return lu.det();
}

template <class R>
R dispersion_scale(const CellSpec& cell, const Cx<R>& k1, const Cx<R>& k2,
                   const Cx<R>& omega, const TransferOptions<R>& opt = {}) {
  TransferMatrix<R> tm = transfer::cell_transfer(cell, k1, k2, omega, opt);
  const long bits = opt.bits;
  Cx<R> iu = Cx<R>::make(0.0, 1.0, bits);
  R s = tm.T.norm1() + abs(exp(iu * k2 * cell.period()));
  R s2 = s * s;
  R s4 = s2 * s2;
  return s4 * s4;
}

// Eq.(38)-style homogeneity defect |k1r k2i - k2r k1i| for reported roots.
inline double homogeneity_defect(Cx<double> k1, Cx<double> k2) {
  return std::fabs(k1.re * k2.im - k2.re * k1.im);
}

struct TemporalRoot {
  Cx<double> omega;       // decay-positive convention: Im ω > 0 decays
  double residual = -1;   // scaled |det(T(ω) - λ I)| after polishing
  bool in_radius = false;
  bool polished = false;
};

struct TemporalSpectrum {
  std::vector<TemporalRoot> roots;
  double trust_radius = 0;
  int order = 0;
  long bits = 0;
};

namespace detail {

// largest radius where the top polynomial coefficient stays negligible
// against the rest of the series
template <class R>
double poly_trust_radius(const transfer::PolyMatrix<R>& p, double tol) {
  const int m = p.order();
  if (m < 1) return 0;
  auto tail_ok = [&](double r) {
    const long bits = p.c[0].bits();
    R rr = Rt<R>::make(r, bits);
    R top = p.c[static_cast<size_t>(m)].norm1();
    R rp = Rt<R>::make(1.0, bits);
    R acc = Rt<R>::make(0.0, bits);
    for (int k = 0; k < m; ++k) {
      acc += p.c[static_cast<size_t>(k)].norm1() * rp;
      rp *= rr;
    }
    // rp == r^m here
    return top * rp <= acc * tol;
  };
  double lo = 0, hi = 1;
  if (!tail_ok(hi)) {
    while (hi > 1e-12 && !tail_ok(hi)) hi *= 0.5;
    if (hi <= 1e-12) return 0;
    lo = hi;
    hi *= 2;
  } else {
    while (hi < 1e18 && tail_ok(hi * 2)) hi *= 2;
    lo = hi;
    hi *= 2;
  }
  for (int it = 0; it < 60; ++it) {
    double mid = 0.5 * (lo + hi);
    if (tail_ok(mid))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

}  // namespace detail

struct TemporalOptions {
  long bits = num::kBitsDd;
  double interp_tol = 1e-10;     // tail criterion for the trust radius
  double trim_tol = 1e-30;       // drop leading det-poly coefficients below this
  int polish_steps = 6;
};

// Temporal damping: fixed real (k1, k2), complex frequency roots of
// det(T_series(ω) - e^{i k2 L} I) = 0. The determinant is interpolated to a
// scalar polynomial on a circle inside the series trust radius, solved via
// its balanced companion matrix, and each in-radius root is polished by a
// secant iteration on the exact (non-truncated) determinant.
//
// Roots are reported with the engineering sign convention: positive
// imaginary part means decay in time, mirroring positive k2i* for spatial
// attenuation. The solve itself runs in the e^{-iωt} frame and negates on
// output.
inline TemporalSpectrum temporal_spectrum(const CellSpec& cell, double k1,
                                          double k2, int order,
                                          const TemporalOptions& topt = {}) {
  using BF = BigFloat;
  cell.validate();
  if (order < 1) throw std::invalid_argument("temporal_spectrum: order >= 1");
  const long bits = topt.bits;
  TemporalSpectrum out;
  out.order = order;
  out.bits = bits;

  transfer::SeriesOptions sopt;
  sopt.bits = bits;
  sopt.eval_radius = 1.0;
  auto k1c = Cx<BF>::make(k1, 0.0, bits);
  auto k2c = Cx<BF>::make(k2, 0.0, bits);
  transfer::PolyMatrix<BF> cellpoly;
  bool first = true;
  for (const auto& layer : cell.layers) {
    auto lp = transfer::series_transfer_omega<BF>(layer, k1c, k2c, order, sopt);
    cellpoly = first ? lp : transfer::poly_multiply_truncate(lp, cellpoly, order);
    first = false;
  }
  double radius = detail::poly_trust_radius(cellpoly, topt.interp_tol);
  out.trust_radius = radius;
  if (radius <= 0) return out;

  const double L = cell.period();
  Cx<BF> iu = Cx<BF>::make(0.0, 1.0, bits);
  Cx<BF> lambda = exp(iu * k2c * L);

  // determinant values on a circle of the trust radius
  const int d = 8 * order;
  const int npts = d + 1;
  std::vector<Cx<BF>> fvals(static_cast<size_t>(npts), Cx<BF>::zero(bits));
  BF pi = Rt<BF>::pi(bits);
  for (int j = 0; j < npts; ++j) {
    BF th = pi * (2.0 * j) / static_cast<double>(npts);
    Cx<BF> xj = Cx<BF>(Rt<BF>::hcos(th), Rt<BF>::hsin(th)) * radius;
    Matrix<BF> m = cellpoly.evaluate(xj);
    for (int i = 0; i < 8; ++i) m(i, i) -= lambda;
    num::Lu<BF> lu(std::move(m));
    fvals[static_cast<size_t>(j)] = lu.det();
  }
  // inverse DFT for the coefficients of det as a polynomial in ω
  std::vector<Cx<BF>> coeff(static_cast<size_t>(npts), Cx<BF>::zero(bits));
  for (int k = 0; k < npts; ++k) {
    Cx<BF> acc = Cx<BF>::zero(bits);
    for (int j = 0; j < npts; ++j) {
      BF th = pi * (-2.0 * j * k) / static_cast<double>(npts);
      acc += fvals[static_cast<size_t>(j)] *
             Cx<BF>(Rt<BF>::hcos(th), Rt<BF>::hsin(th));
    }
    coeff[static_cast<size_t>(k)] = acc / static_cast<double>(npts);
    // undo the radius scaling: coefficient of ω^k
    BF rp = Rt<BF>::make(1.0, bits);
    for (int q = 0; q < k; ++q) rp *= radius;
    coeff[static_cast<size_t>(k)] = coeff[static_cast<size_t>(k)] / rp;
  }
  // trim negligible leading coefficients, build the companion matrix
  BF cmax = Rt<BF>::make(0.0, bits);
  for (const auto& c : coeff) {
    BF m = abs1(c);
    if (m > cmax) cmax = m;
  }
  if (cmax == 0.0) return out;
  int deg = npts - 1;
  while (deg > 0 &&
         abs1(coeff[static_cast<size_t>(deg)]) <= cmax * topt.trim_tol)
    --deg;
  if (deg < 1) return out;
  Matrix<BF> comp(deg, deg, bits);
  for (int i = 1; i < deg; ++i) comp(i, i - 1) = Cx<BF>::one(bits);
  for (int i = 0; i < deg; ++i)
    comp(i, deg - 1) = -(coeff[static_cast<size_t>(i)] /
                         coeff[static_cast<size_t>(deg)]);
  std::vector<Cx<BF>> roots = num::eigenvalues<BF>(comp, 120);

  TransferOptions<BF> eopt;
  eopt.bits = bits;
  auto exact_det = [&](const Cx<BF>& w) {
    TransferMatrix<BF> tme = transfer::cell_transfer(cell, k1c, k2c, w, eopt);
    Matrix<BF> m = tme.T;
    for (int i = 0; i < 8; ++i) m(i, i) -= lambda;
    num::Lu<BF> lu(std::move(m));
    return lu.det();
  };
  // scale for residual reporting
  BF scale(bits);
  {
    TransferMatrix<BF> t0 = transfer::cell_transfer(
        cell, k1c, k2c, Cx<BF>::make(radius, 0.0, bits), eopt);
    BF s = t0.T.norm1() + abs(lambda);
    BF s2 = s * s;
    BF s4 = s2 * s2;
    scale = s4 * s4;
  }

  for (const auto& nu : roots) {
    TemporalRoot tr;
    tr.in_radius = abs(nu) <= Rt<BF>::make(radius, bits);
    Cx<BF> w = nu;
    if (tr.in_radius) {
      // secant refinement on the exact determinant
      Cx<BF> w0 = w;
      Cx<BF> step = Cx<BF>::make(1e-6 * radius, 1e-6 * radius, bits);
      Cx<BF> w1 = w + step;
      Cx<BF> f0 = exact_det(w0), f1 = exact_det(w1);
      for (int it = 0; it < topt.polish_steps; ++it) {
        Cx<BF> denom = f1 - f0;
        if (abs1(denom) == 0.0) break;
        Cx<BF> w2 = w1 - f1 * (w1 - w0) / denom;
        w0 = w1;
        f0 = f1;
        w1 = w2;
        f1 = exact_det(w1);
        if (!(abs(f1) < abs(f0))) break;
      }
      w = abs(f1) <= abs(f0) ? w1 : w0;
      tr.polished = true;
      tr.residual = Rt<BF>::to_double(abs(exact_det(w)) / scale);
    }
    // report in the decay-positive frame
    tr.omega = (-w).to_double();
    out.roots.push_back(tr);
  }
  std::sort(out.roots.begin(), out.roots.end(),
            [](const TemporalRoot& a, const TemporalRoot& b) {
              double ma = std::hypot(a.omega.re, a.omega.im);
              double mb = std::hypot(b.omega.re, b.omega.im);
              if (ma != mb) return ma < mb;
              if (a.omega.re != b.omega.re) return a.omega.re < b.omega.re;
              return a.omega.im < b.omega.im;
            });
  return out;
}

}  // namespace thermobloch::spectrum
