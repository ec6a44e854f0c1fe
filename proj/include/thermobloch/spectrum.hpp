// Copyright (c) thermobloch contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <functional>
#include <future>
#include <string>
#include <thread>

#include "thermobloch/transfer.hpp"

namespace thermobloch::spectrum {

using materials::CouplingFactor;
using num::BigFloat;
using num::CharPoly;
using num::Cx;
using num::Matrix;
using num::Rt;
using transfer::CellSpec;
using transfer::TransferMatrix;
using transfer::TransferOptions;

enum class PrecisionMode { double53, dd, qd, adaptive };

inline long fixed_bits(PrecisionMode m) {
  switch (m) {
    case PrecisionMode::double53: return num::kBitsDouble;
    case PrecisionMode::dd: return num::kBitsDd;
    case PrecisionMode::qd: return num::kBitsQd;
    default: return num::kBitsDd;
  }
}

inline const char* precision_name(PrecisionMode m) {
  switch (m) {
    case PrecisionMode::double53: return "double";
    case PrecisionMode::dd: return "dd";
    case PrecisionMode::qd: return "qd";
    default: return "auto";
  }
}

// Working-precision policy. The diffusive modes of a cell grow by
// A = Σ l (sqrt(ωp/2K) + sqrt(ωq/2D)) nepers; the quartic path needs about
// 6.2 extra bits per neper (trace-recursion amplification, measured), the
// balanced QR route well under 1 bit per neper. Residual checks escalate
// whenever the model underestimates.
struct PrecisionPolicy {
  PrecisionMode mode = PrecisionMode::dd;
  bool qr_fallback = false;  // after a failed escalation, fall back to QR
  long bits_cap = 1L << 18;
  double palin_tol = 1e-12;
  double fl_bits_per_neper = 7.5 * 1.4427;  // headroom over measured 6.2
  double qr_bits_per_neper = 1.4 * 1.4427;
  long fl_route_bits_cap = 8192;  // prefer QR route beyond this estimate
  int max_attempts = 3;

  long fl_bits(double nepers) const {
    return num::kBitsDd + static_cast<long>(fl_bits_per_neper * nepers) + 64;
  }
  long qr_bits(double nepers) const {
    return num::kBitsDd + static_cast<long>(qr_bits_per_neper * nepers) + 64;
  }
};

enum class WaveFamily { shear, compressional, thermal, diffusive, mixed };

inline const char* family_name(WaveFamily f) {
  switch (f) {
    case WaveFamily::shear: return "shear";
    case WaveFamily::compressional: return "compressional";
    case WaveFamily::thermal: return "thermal";
    case WaveFamily::diffusive: return "diffusive";
    default: return "mixed";
  }
}

// k2* from a Floquet multiplier: k2r* = Arg λ in (-π, π], k2i* = -ln|λ|.
template <class R>
std::pair<R, R> lambda_to_k2(const Cx<R>& lambda) {
  const long bits = lambda.bits();
  if (abs1(lambda) == 0.0)
    throw std::invalid_argument("lambda_to_k2: zero multiplier");
  R k2r = arg(lambda);
  R pi = Rt<R>::pi(bits);
  if (k2r <= -pi) k2r = pi;  // half-open zone, branch cut on the negative axis
  R k2i = -Rt<R>::hlog(abs(lambda));
  return {k2r, k2i};
}

struct BranchData {
  Cx<double> lambda;          // overflows to ±inf beyond the double range
  double k2r_star = 0;        // canonical log-polar data, always finite
  double k2i_star = 0;
  std::array<Cx<double>, 8> eigvec{};
  double eig_residual = -1;   // ||Tv - λv||_2 / ||T||_1
  WaveFamily family = WaveFamily::mixed;
  bool propagating = false;
};

struct PointDiagnostics {
  long bits_used = 0;
  bool escalated = false;
  bool qr_route = false;
  bool used_series_exp = false;
  double det_residual = -1;
  double palin_residual = -1;
  double reciprocity_residual = -1;
  double qr_mismatch = -1;   // pre-symmetrization pairing defect (QR route)
  double qr_hausdorff = -1;  // quartic-vs-QR eigenvalue distance if checked
};

struct PointResult {
  bool ok = false;
  std::string error;
  std::array<BranchData, 8> branches;
  PointDiagnostics diag;
};

struct EvalOptions {
  PrecisionPolicy precision;
  double eps_band = 1e-6;
  transfer::ExpMethod exp_method = transfer::ExpMethod::automatic;
  bool crosscheck_qr = false;
  double extra_nepers = 0;  // e.g. |k1| L for evanescent elastic content
};

// Relative Hausdorff distance between two eigenvalue multisets.
template <class R>
R hausdorff_relative(const std::vector<Cx<R>>& a, const std::vector<Cx<R>>& b) {
  const long bits = a.empty() ? num::kBitsDd : a[0].bits();
  R worst = Rt<R>::make(0.0, bits);
  auto one_sided = [&](const std::vector<Cx<R>>& u, const std::vector<Cx<R>>& v) {
    for (const auto& x : u) {
      R best = Rt<R>::make(-1.0, bits);
      for (const auto& y : v) {
        R scale = max(abs(x), abs(y));
        if (scale == 0.0) scale = Rt<R>::make(1.0, bits);
        R d = abs(x - y) / scale;
        if (best < 0.0 || d < best) best = d;
      }
      if (best > worst) worst = best;
    }
  };
  one_sided(a, b);
  one_sided(b, a);
  return worst;
}

namespace detail {

// Greedy reciprocal pairing of 8 eigenvalues by the |λi λj - 1| defect,
// followed by exact symmetrization within each pair.
template <class R>
void pair_and_symmetrize(std::vector<Cx<R>>& lam, R& mismatch_out) {
  const long bits = lam[0].bits();
  const Cx<R> one = Cx<R>::one(bits);
  std::vector<bool> used(lam.size(), false);
  std::vector<Cx<R>> out;
  out.reserve(lam.size());
  R mismatch = Rt<R>::make(0.0, bits);
  for (size_t rounds = 0; rounds < lam.size() / 2; ++rounds) {
    size_t bi = 0, bj = 0;
    R best = Rt<R>::make(-1.0, bits);
    for (size_t i = 0; i < lam.size(); ++i) {
      if (used[i]) continue;
      for (size_t j = i + 1; j < lam.size(); ++j) {
        if (used[j]) continue;
        R d = abs(lam[i] * lam[j] - one);
        if (best < 0.0 || d < best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    }
    used[bi] = used[bj] = true;
    if (best > mismatch) mismatch = best;
    // scale the pair so the product is exactly one
    Cx<R> g = sqrt(lam[bi] * lam[bj]);
    Cx<R> l1 = abs1(g) > 0.0 ? lam[bi] / g : lam[bi];
    out.push_back(l1);
    out.push_back(one / l1);
  }
  lam = std::move(out);
  mismatch_out = mismatch;
}

inline void classify_branches(std::array<BranchData, 8>& br, double eps_band) {
  // Per-field scales from the modal matrix itself; the raw components carry
  // different physical units and cannot be compared directly. Branches
  // decaying faster than e^-50 per cell have numerically meaningless
  // eigenvectors: they neither contribute to the scales nor may they claim
  // an elastic label, only the thermal/diffusive distinction.
  const double cutoff = 50.0;
  double scale[4] = {0, 0, 0, 0};
  double scale_all[4] = {0, 0, 0, 0};
  for (const auto& b : br)
    for (int f = 0; f < 4; ++f) {
      double m = std::hypot(b.eigvec[f].re, b.eigvec[f].im);
      if (m > scale_all[f]) scale_all[f] = m;
      if (std::fabs(b.k2i_star) <= cutoff && m > scale[f]) scale[f] = m;
    }
  for (int f = 0; f < 4; ++f)
    if (scale[f] == 0) scale[f] = scale_all[f];
  for (auto& b : br) {
    double w[4];
    for (int f = 0; f < 4; ++f) {
      double m = std::hypot(b.eigvec[f].re, b.eigvec[f].im);
      w[f] = scale[f] > 0 ? m / scale[f] : 0.0;
    }
    b.propagating = std::fabs(b.k2i_star) < eps_band;
    if (std::fabs(b.k2i_star) > cutoff) {
      double n2 = std::hypot(w[2], w[3]);
      if (n2 <= 0) {
        b.family = WaveFamily::mixed;
      } else if (w[2] >= 0.6 * n2 && w[2] >= w[3]) {
        b.family = WaveFamily::thermal;
      } else if (w[3] >= 0.6 * n2) {
        b.family = WaveFamily::diffusive;
      } else {
        b.family = WaveFamily::mixed;
      }
      continue;
    }
    double n2 = 0;
    for (int f = 0; f < 4; ++f) n2 += w[f] * w[f];
    int fmax = 0;
    for (int f = 1; f < 4; ++f)
      if (w[f] > w[fmax]) fmax = f;
    if (n2 <= 0 || w[fmax] < 0.6 * std::sqrt(n2)) {
      b.family = WaveFamily::mixed;
    } else {
      b.family = static_cast<WaveFamily>(fmax);
    }
  }
}

}  // namespace detail

// Solve the Floquet eigenproblem of a cell transfer matrix. Default path:
// Faddeev-LeVerrier invariants -> palindromic quartic -> closed-form roots,
// with reciprocal pairs built as (λ, 1/λ). QR route: balanced Hessenberg QR
// with reciprocal pairing, used as cross-check or high-attenuation fallback.
template <class R>
struct FloquetSolution {
  std::vector<Cx<R>> lambda;  // 8, in (λ, 1/λ) adjacent pairs
  R reciprocity_residual;
  R palindromic_residual;
  bool qr_route = false;
  R qr_mismatch;
};

template <class R>
FloquetSolution<R> solve_floquet(const TransferMatrix<R>& tm, double palin_tol,
                                 bool force_qr = false) {
  const long bits = tm.T.bits();
  FloquetSolution<R> sol;
  sol.reciprocity_residual = Rt<R>::make(0.0, bits);
  sol.qr_mismatch = Rt<R>::make(-1.0, bits);
  CharPoly<R> cp = tm.charpoly ? *tm.charpoly : num::faddeev_leverrier(tm.T);
  sol.palindromic_residual = cp.palindromic_residual();
  bool quartic_ok =
      !force_qr && sol.palindromic_residual <= Rt<R>::make(palin_tol, bits);
  if (quartic_ok) {
    auto q = num::palindromic_reduce(cp, Rt<R>::make(palin_tol, bits));
    auto zs = num::solve_quartic(q);
    sol.lambda.reserve(8);
    for (const auto& z : zs) {
      auto [l1, l2] = num::z_to_lambda(z);
      sol.lambda.push_back(l1);
      sol.lambda.push_back(l2);
    }
  } else {
    sol.qr_route = true;
    sol.lambda = num::eigenvalues<R>(tm.T);
    detail::pair_and_symmetrize(sol.lambda, sol.qr_mismatch);
  }
  const Cx<R> one = Cx<R>::one(bits);
  for (size_t p = 0; p + 1 < sol.lambda.size(); p += 2) {
    R d = abs(sol.lambda[p] * sol.lambda[p + 1] - one);
    if (d > sol.reciprocity_residual) sol.reciprocity_residual = d;
  }
  return sol;
}

namespace detail {

// eigenvectors + wavenumbers + classification into BranchData
inline void fill_branches(const TransferMatrix<BigFloat>& tm,
                          const FloquetSolution<BigFloat>& fs,
                          const EvalOptions& opt, PointResult& res) {
  using BF = BigFloat;
  auto tnorm = tm.T.norm1();
  if (tnorm == 0.0) tnorm = Rt<BF>::make(1.0, tm.T.bits());
  for (int k = 0; k < 8; ++k) {
    const Cx<BF>& lam = fs.lambda[static_cast<size_t>(k)];
    BranchData& b = res.branches[static_cast<size_t>(k)];
    auto [k2r, k2i] = lambda_to_k2(lam);
    b.k2r_star = Rt<BF>::to_double(k2r);
    b.k2i_star = Rt<BF>::to_double(k2i);
    b.lambda = lam.to_double();
    auto v = num::inverse_iteration(tm.T, lam);
    BF nv = Rt<BF>::make(0.0, tm.T.bits());
    for (const auto& e : v) nv += norm(e);
    nv = Rt<BF>::hsqrt(nv);
    for (int i = 0; i < 8; ++i) {
      auto e = nv > 0.0 ? v[static_cast<size_t>(i)] / nv
                        : v[static_cast<size_t>(i)];
      b.eigvec[static_cast<size_t>(i)] = e.to_double();
    }
    b.eig_residual =
        Rt<BF>::to_double(num::eig_residual(tm.T, lam, v) / (tnorm * nv));
  }
  // deterministic intra-point order: k2i* ascending, then k2r* ascending
  std::sort(res.branches.begin(), res.branches.end(),
            [](const BranchData& a, const BranchData& c) {
              if (a.k2i_star != c.k2i_star) return a.k2i_star < c.k2i_star;
              return a.k2r_star < c.k2r_star;
            });
  classify_branches(res.branches, opt.eps_band);
}

}  // namespace detail

// Full evaluation of one (cell, k1, ω) point: transfer matrix, multipliers,
// eigenvectors, wavenumbers, classification, diagnostics. Escalates the
// working precision per the policy when palindromicity is lost.
inline PointResult evaluate_point(const CellSpec& cell, double k1, double omega,
                                  const EvalOptions& opt) {
  using BF = BigFloat;
  PointResult res;
  const PrecisionPolicy& pol = opt.precision;
  double nepers =
      transfer::attenuation_nepers(cell, std::fabs(omega)) + opt.extra_nepers;

  struct Attempt {
    long bits;
    bool qr;
  };
  std::vector<Attempt> plan;
  if (pol.mode == PrecisionMode::adaptive) {
    long fl = pol.fl_bits(nepers);
    long qb = pol.qr_bits(nepers);
    if (fl <= pol.fl_route_bits_cap) {
      plan.push_back({std::min(fl, pol.bits_cap), false});
      plan.push_back({std::min(fl * 3 / 2, pol.bits_cap), false});
      plan.push_back({std::min(fl * 9 / 4, pol.bits_cap), false});
      if (pol.qr_fallback) plan.push_back({std::min(qb, pol.bits_cap), true});
    } else {
      plan.push_back({std::min(qb, pol.bits_cap), true});
      plan.push_back({std::min(qb * 3 / 2, pol.bits_cap), true});
      plan.push_back({std::min(qb * 9 / 4, pol.bits_cap), true});
    }
  } else {
    long base = fixed_bits(pol.mode);
    plan.push_back({base, false});
    plan.push_back({base * 2, false});  // one escalation step
    if (pol.qr_fallback) plan.push_back({base, true});
  }

  std::string last_error;
  for (size_t attempt = 0; attempt < plan.size(); ++attempt) {
    const long bits = plan[attempt].bits;
    const bool force_qr = plan[attempt].qr;
    try {
      TransferOptions<BF> topt;
      topt.bits = bits;
      topt.method = opt.exp_method;
      auto k1c = Cx<BF>::make(k1, 0.0, bits);
      auto k2c = Cx<BF>::zero(bits);
      auto wc = Cx<BF>::make(omega, 0.0, bits);
      TransferMatrix<BF> tm = transfer::cell_transfer(cell, k1c, k2c, wc, topt);
      bool palin_ok =
          tm.palindromic_residual <= Rt<BF>::make(pol.palin_tol, bits);
      if (!palin_ok && !force_qr) {
        last_error = "palindromicity lost (residual " +
                     std::to_string(Rt<BF>::to_double(tm.palindromic_residual)) +
                     ") at " + std::to_string(bits) + " bits";
        continue;
      }
      FloquetSolution<BF> fs = solve_floquet(tm, pol.palin_tol, force_qr);

      res.diag.bits_used = bits;
      res.diag.escalated = attempt > 0;
      res.diag.qr_route = fs.qr_route;
      res.diag.used_series_exp = tm.used_series;
      res.diag.det_residual = Rt<BF>::to_double(tm.det_residual);
      res.diag.palin_residual = Rt<BF>::to_double(fs.palindromic_residual);
      res.diag.reciprocity_residual =
          Rt<BF>::to_double(fs.reciprocity_residual);
      if (fs.qr_route) res.diag.qr_mismatch = Rt<BF>::to_double(fs.qr_mismatch);
      if (opt.crosscheck_qr && !fs.qr_route) {
        auto qreigs = num::eigenvalues<BF>(tm.T);
        res.diag.qr_hausdorff =
            Rt<BF>::to_double(hausdorff_relative(fs.lambda, qreigs));
      }

      detail::fill_branches(tm, fs, opt, res);
      res.ok = true;
      return res;
    } catch (const std::exception& e) {
      last_error = e.what();
    }
  }
  res.ok = false;
  res.error = last_error.empty() ? "evaluation failed" : last_error;
  return res;
}

}  // namespace thermobloch::spectrum
