// Copyright (c) thermobloch contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>

#include "thermobloch/spectrum.hpp"

namespace thermobloch::spectrum {

struct SweepConfig {
  std::vector<double> omega_star;  // strictly increasing, >= 0
  double k1_star = 0;              // k1 L, real
  std::vector<double> deltas = {1.0};
  double omega_ref = 1.0;  // rad/s
  PrecisionPolicy precision;
  double eps_band = 1e-6;
  transfer::ExpMethod exp_method = transfer::ExpMethod::automatic;
  bool crosscheck_qr = false;
  int threads = 1;

  void validate() const {
    if (omega_star.empty())
      throw std::invalid_argument("sweep: omega grid must be non-empty");
    for (size_t i = 0; i < omega_star.size(); ++i) {
      if (!(omega_star[i] >= 0))
        throw std::invalid_argument("sweep: omega must be >= 0");
      if (i > 0 && !(omega_star[i] > omega_star[i - 1]))
        throw std::invalid_argument("sweep: omega grid must be strictly increasing");
    }
    if (deltas.empty()) throw std::invalid_argument("sweep: delta list empty");
    for (double d : deltas)
      if (d < 0) throw std::invalid_argument("sweep: delta must be >= 0");
    if (!(eps_band > 0)) throw std::invalid_argument("sweep: eps_band must be > 0");
  }
};

struct SpectrumPoint {
  double omega_star = 0;
  double delta = 0;
  double k1_star = 0;
  int branch = 0;
  double lambda_re = 0, lambda_im = 0;
  double k2r_star = 0, k2i_star = 0;
  WaveFamily family = WaveFamily::mixed;
  bool propagating = false;
  bool inhomogeneous = false;
  long bits_used = 0;
  bool escalated = false, qr_route = false, series_exp = false;
  std::array<Cx<double>, 8> eigvec{};
};

struct PointFailure {
  double omega_star = 0;
  double delta = 0;
  std::string reason;
  long bits_tried = 0;
};

struct InvariantGates {
  double det_residual = 1e-18;
  double reciprocity = 1e-12;
};

struct SpectrumTable {
  std::vector<SpectrumPoint> points;
  std::vector<PointFailure> failures;
  int escalations = 0;
  double worst_det_residual = 0;
  double worst_reciprocity = 0;
  bool invariants_ok = true;
};

// Apply the coupling factor to every layer of a cell.
inline CellSpec coupled_cell(const CellSpec& cell, double delta) {
  CellSpec out = cell;
  for (auto& l : out.layers)
    l.coefficients = materials::apply_coupling(l.coefficients, {delta});
  return out;
}

namespace detail {

// branch continuity metric in log-polar coordinates plus eigenvector overlap
inline double branch_distance(const SpectrumPoint& a, const BranchData& b) {
  double dr = a.k2r_star - b.k2r_star;
  const double two_pi = 6.283185307179586476925286766559;
  dr -= two_pi * std::round(dr / two_pi);
  double di = (a.k2i_star - b.k2i_star) /
              (1.0 + std::fabs(a.k2i_star) + std::fabs(b.k2i_star));
  double ovl_re = 0, ovl_im = 0;
  double na = 0, nb = 0;
  for (int i = 0; i < 8; ++i) {
    ovl_re += a.eigvec[i].re * b.eigvec[i].re + a.eigvec[i].im * b.eigvec[i].im;
    ovl_im += a.eigvec[i].re * b.eigvec[i].im - a.eigvec[i].im * b.eigvec[i].re;
    na += a.eigvec[i].re * a.eigvec[i].re + a.eigvec[i].im * a.eigvec[i].im;
    nb += b.eigvec[i].re * b.eigvec[i].re + b.eigvec[i].im * b.eigvec[i].im;
  }
  double overlap = 0;
  if (na > 0 && nb > 0)
    overlap = std::sqrt((ovl_re * ovl_re + ovl_im * ovl_im) / (na * nb));
  return std::fabs(dr) / 3.14159265358979323846 + std::fabs(di) +
         (1.0 - overlap);
}

}  // namespace detail

// Frequency sweep over one or more coupling factors. Points are evaluated
// independently (optionally in parallel); branch tracking is a sequential
// pass; rows come out ordered by (delta, omega, k2i*, k2r*).
inline SpectrumTable sweep(const CellSpec& cell, const SweepConfig& cfg) {
  cfg.validate();
  cell.validate();
  SpectrumTable table;
  const double L = cell.period();
  const double k1 = cfg.k1_star / L;

  EvalOptions eopt;
  eopt.precision = cfg.precision;
  eopt.eps_band = cfg.eps_band;
  eopt.exp_method = cfg.exp_method;
  eopt.crosscheck_qr = cfg.crosscheck_qr;
  eopt.extra_nepers = std::fabs(cfg.k1_star) * 2.0;

  for (double delta : cfg.deltas) {
    CellSpec ccell = coupled_cell(cell, delta);
    std::vector<PointResult> results(cfg.omega_star.size());
    int nthreads = cfg.threads > 0
                       ? cfg.threads
                       : static_cast<int>(std::thread::hardware_concurrency());
    if (nthreads < 1) nthreads = 1;
    if (nthreads == 1) {
      for (size_t i = 0; i < cfg.omega_star.size(); ++i)
        results[i] =
            evaluate_point(ccell, k1, cfg.omega_star[i] * cfg.omega_ref, eopt);
    } else {
      std::atomic<size_t> next{0};
      auto worker = [&]() {
        for (;;) {
          size_t i = next.fetch_add(1);
          if (i >= cfg.omega_star.size()) break;
          results[i] = evaluate_point(ccell, k1,
                                      cfg.omega_star[i] * cfg.omega_ref, eopt);
        }
      };
      std::vector<std::thread> pool;
      for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
      for (auto& t : pool) t.join();
    }

    // sequential pass: branch tracking + row emission
    std::array<SpectrumPoint, 8> prev{};
    bool have_prev = false;
    for (size_t i = 0; i < cfg.omega_star.size(); ++i) {
      const PointResult& pr = results[i];
      if (!pr.ok) {
        table.failures.push_back({cfg.omega_star[i], delta, pr.error,
                                  pr.diag.bits_used});
        continue;
      }
      std::array<SpectrumPoint, 8> rows;
      // assign branch indices by continuity against the previous frequency
      std::array<int, 8> assign{};
      if (!have_prev) {
        for (int b = 0; b < 8; ++b) assign[b] = b;  // (k2i,k2r)-sorted order
      } else {
        std::array<bool, 8> used_prev{}, used_new{};
        for (int pick = 0; pick < 8; ++pick) {
          double best = 0;
          int bi = -1, bj = -1;
          for (int p = 0; p < 8; ++p) {
            if (used_prev[p]) continue;
            for (int q = 0; q < 8; ++q) {
              if (used_new[q]) continue;
              double d = detail::branch_distance(prev[p], pr.branches[q]);
              if (bi < 0 || d < best) {
                best = d;
                bi = p;
                bj = q;
              }
            }
          }
          used_prev[bi] = used_new[bj] = true;
          assign[bj] = prev[bi].branch - 1;
        }
      }
      for (int q = 0; q < 8; ++q) {
        const BranchData& b = pr.branches[q];
        SpectrumPoint sp;
        sp.omega_star = cfg.omega_star[i];
        sp.delta = delta;
        sp.k1_star = cfg.k1_star;
        sp.branch = assign[q] + 1;
        sp.lambda_re = b.lambda.re;
        sp.lambda_im = b.lambda.im;
        sp.k2r_star = b.k2r_star;
        sp.k2i_star = b.k2i_star;
        sp.family = b.family;
        sp.propagating = b.propagating;
        sp.inhomogeneous =
            cfg.k1_star != 0.0 && std::fabs(b.k2i_star) >= cfg.eps_band;
        sp.bits_used = pr.diag.bits_used;
        sp.escalated = pr.diag.escalated;
        sp.qr_route = pr.diag.qr_route;
        sp.series_exp = pr.diag.used_series_exp;
        sp.eigvec = b.eigvec;
        rows[q] = sp;
      }
      if (pr.diag.escalated) ++table.escalations;
      if (pr.diag.det_residual > table.worst_det_residual)
        table.worst_det_residual = pr.diag.det_residual;
      if (pr.diag.reciprocity_residual > table.worst_reciprocity)
        table.worst_reciprocity = pr.diag.reciprocity_residual;
      prev = rows;
      have_prev = true;
      for (auto& r : rows) table.points.push_back(r);
    }
  }
  std::sort(table.points.begin(), table.points.end(),
            [](const SpectrumPoint& a, const SpectrumPoint& b) {
              if (a.delta != b.delta) return a.delta < b.delta;
              if (a.omega_star != b.omega_star) return a.omega_star < b.omega_star;
              if (a.k2i_star != b.k2i_star) return a.k2i_star < b.k2i_star;
              return a.k2r_star < b.k2r_star;
            });
  return table;
}

inline bool check_invariants(SpectrumTable& table, const InvariantGates& g) {
  table.invariants_ok = table.failures.empty() &&
                        table.worst_det_residual <= g.det_residual &&
                        table.worst_reciprocity <= g.reciprocity;
  return table.invariants_ok;
}

// ---------------------------------------------------------------------------
// pass-band / band-gap extraction

struct BandInterval {
  int index = 0;   // 1-based per kind
  bool gap = false;
  double omega_lo = 0, omega_hi = 0;
  double width() const { return omega_hi - omega_lo; }
  double mean() const { return 0.5 * (omega_lo + omega_hi); }
};

struct BandReport {
  WaveFamily family = WaveFamily::mixed;
  double delta = 0;
  std::vector<BandInterval> intervals;  // alternating, ascending
  bool under_resolved = false;
};

// does this family propagate at the given frequency?
using FamilyPredicate = std::function<bool(double omega_star)>;

inline FamilyPredicate make_family_predicate(const CellSpec& cell, double delta,
                                             WaveFamily family,
                                             const SweepConfig& cfg) {
  CellSpec ccell = coupled_cell(cell, delta);
  EvalOptions eopt;
  eopt.precision = cfg.precision;
  eopt.eps_band = cfg.eps_band;
  eopt.exp_method = cfg.exp_method;
  eopt.extra_nepers = std::fabs(cfg.k1_star) * 2.0;
  double k1 = cfg.k1_star / cell.period();
  double omega_ref = cfg.omega_ref;
  return [ccell, k1, family, eopt, omega_ref](double omega_star) {
    PointResult pr = evaluate_point(ccell, k1, omega_star * omega_ref, eopt);
    if (!pr.ok) throw std::runtime_error("band edge evaluation failed: " + pr.error);
    for (const auto& b : pr.branches)
      if (b.family == family && b.propagating) return true;
    return false;
  };
}

// Pass/gap intervals of one family from the swept table, with edges refined
// by bisection on the propagation predicate to the given relative tolerance.
inline BandReport band_report(const SpectrumTable& table, WaveFamily family,
                              double delta, const FamilyPredicate& prop,
                              double rel_tol = 1e-6) {
  BandReport rep;
  rep.family = family;
  rep.delta = delta;
  // collect the frequency grid (ascending, unique) and per-frequency status
  std::map<double, bool> status;
  for (const auto& p : table.points) {
    if (p.delta != delta) continue;
    auto [it, inserted] = status.try_emplace(p.omega_star, false);
    if (p.family == family && p.propagating) it->second = true;
  }
  if (status.size() < 2) {
    rep.under_resolved = true;
    return rep;
  }
  std::vector<std::pair<double, bool>> grid(status.begin(), status.end());
  // build intervals with bisection-refined edges
  std::vector<double> edges;    // refined transition frequencies
  std::vector<bool> seg_state;  // state of each segment between edges
  seg_state.push_back(grid.front().second);
  for (size_t i = 0; i + 1 < grid.size(); ++i) {
    if (grid[i].second == grid[i + 1].second) continue;
    double lo = grid[i].first, hi = grid[i + 1].first;
    bool lo_prop = grid[i].second;
    while ((hi - lo) > rel_tol * (0.5 * (hi + lo) + 1e-300)) {
      double mid = 0.5 * (lo + hi);
      if (prop(mid) == lo_prop)
        lo = mid;
      else
        hi = mid;
    }
    edges.push_back(0.5 * (lo + hi));
    seg_state.push_back(grid[i + 1].second);
  }
  double start = grid.front().first;
  int pass_idx = 0, gap_idx = 0;
  for (size_t s = 0; s < seg_state.size(); ++s) {
    double stop = s < edges.size() ? edges[s] : grid.back().first;
    BandInterval iv;
    iv.gap = !seg_state[s];
    iv.index = iv.gap ? ++gap_idx : ++pass_idx;
    iv.omega_lo = start;
    iv.omega_hi = stop;
    rep.intervals.push_back(iv);
    start = stop;
  }
  // a band is under-resolved when it contains fewer than 3 grid samples
  for (const auto& iv : rep.intervals) {
    int count = 0;
    for (const auto& g : grid)
      if (g.first >= iv.omega_lo && g.first <= iv.omega_hi) ++count;
    if (count < 3) rep.under_resolved = true;
  }
  return rep;
}

}  // namespace thermobloch::spectrum
