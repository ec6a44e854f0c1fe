// Copyright (c) thermobloch contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <filesystem>

#include "thermobloch/config.hpp"
#include "thermobloch/csv.hpp"
#include "thermobloch/svg.hpp"
#include "thermobloch/temporal.hpp"
#include "thermobloch/version.hpp"

namespace thermobloch::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitNumeric = 3,
  kExitIo = 4,
};

struct RunArtifacts {
  std::vector<std::string> files;
  int exit_code = kExitOk;
  std::string message;
};

namespace detail {

inline std::string delta_tag(double d) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", d);
  return buf;
}

inline bool write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << content;
  return static_cast<bool>(out);
}

}  // namespace detail

// Batch entry point: sweep, band reports, CSV + manifest + optional SVG.
// Per-point numeric failures do not abort the run; they are logged in the
// manifest and reflected in the exit code. All CSV content is assembled in
// memory first so an I/O failure never leaves a partial table behind.
inline RunArtifacts run(const RunConfig& rc) {
  namespace fs = std::filesystem;
  RunArtifacts art;
  json manifest;
  manifest["tool"] = "thermobloch";
  manifest["version"] = kVersion;
  manifest["config"] = rc.effective;
  manifest["config_hash"] = config_hash(rc.effective);
  manifest["precision"] = precision_name(rc.sweep.precision.mode);

  const auto t_start = std::chrono::steady_clock::now();

  // writability check before any compute
  std::error_code ec;
  fs::create_directories(rc.out_dir, ec);
  {
    std::string probe = rc.out_dir + "/.write_probe";
    if (!detail::write_file(probe, "ok")) {
      art.exit_code = kExitIo;
      art.message = "output directory not writable: " + rc.out_dir;
      return art;
    }
    fs::remove(probe, ec);
  }

  // spot check of the k2-independence claim before sweeping; precision
  // follows the attenuation estimate so the check is meaningful at any
  // frequency, and a genuine k2 dependence would show up at O(1)
  {
    double wmid = rc.sweep.omega_star[rc.sweep.omega_star.size() / 2] *
                  rc.sweep.omega_ref;
    double nepers = transfer::attenuation_nepers(rc.cell, wmid);
    const long bits = rc.sweep.precision.qr_bits(nepers);
    transfer::TransferOptions<num::BigFloat> topt;
    topt.bits = bits;
    double L = rc.cell.period();
    auto k1c = num::Cx<num::BigFloat>::make(rc.sweep.k1_star / L, 0.0, bits);
    auto wc = num::Cx<num::BigFloat>::make(wmid, 0.0, bits);
    auto res = transfer::k2_independence_residual(
        rc.cell, k1c, wc, topt, num::Cx<num::BigFloat>::zero(bits),
        num::Cx<num::BigFloat>::make(3.14159265358979 / L, 0.0, bits));
    double resd = num::Rt<num::BigFloat>::to_double(res);
    manifest["k2_independence_residual"] = resd;
    if (!(resd < 1e-6)) {
      art.exit_code = kExitNumeric;
      art.message = "transfer matrix depends on k2 (residual " +
                    std::to_string(resd) + "); aborting";
      manifest["error"] = art.message;
      detail::write_file(rc.out_dir + "/manifest.json", manifest.dump(2) + "\n");
      return art;
    }
  }

  spectrum::SpectrumTable table = spectrum::sweep(rc.cell, rc.sweep);
  spectrum::check_invariants(table, rc.gates);

  std::vector<spectrum::BandReport> reports;
  std::string band_error;
  if (rc.bands.enabled) {
    for (double delta : rc.sweep.deltas) {
      for (auto fam : rc.bands.families) {
        try {
          auto pred =
              spectrum::make_family_predicate(rc.cell, delta, fam, rc.sweep);
          reports.push_back(spectrum::band_report(table, fam, delta, pred,
                                                  rc.bands.edge_rel_tol));
        } catch (const std::exception& e) {
          band_error = e.what();
        }
      }
    }
  }

  // assemble outputs in memory
  std::vector<std::pair<std::string, std::string>> files;
  for (double delta : rc.sweep.deltas) {
    files.emplace_back(
        rc.out_dir + "/spectrum_delta" + detail::delta_tag(delta) + ".csv",
        spectrum_csv(table, delta));
  }
  if (rc.bands.enabled)
    files.emplace_back(rc.out_dir + "/band_report.csv", band_csv(reports));
  if (rc.plots) {
    files.emplace_back(rc.out_dir + "/spectrum_k2r.svg",
                       svg_spectrum_k2r(table));
    files.emplace_back(rc.out_dir + "/spectrum_k2i.svg",
                       svg_spectrum_k2i(table));
    files.emplace_back(
        rc.out_dir + "/bands_vs_delta.svg",
        svg_bands_vs_delta(reports, spectrum::WaveFamily::compressional));
  }

  const auto t_end = std::chrono::steady_clock::now();
  manifest["points_total"] =
      rc.sweep.omega_star.size() * rc.sweep.deltas.size();
  manifest["points_emitted"] = table.points.size() / 8;
  manifest["escalations"] = table.escalations;
  manifest["worst_det_residual"] = table.worst_det_residual;
  manifest["worst_reciprocity_residual"] = table.worst_reciprocity;
  manifest["invariants_ok"] = table.invariants_ok;
  manifest["failures"] = json::array();
  for (const auto& f : table.failures)
    manifest["failures"].push_back({{"omega_star", f.omega_star},
                                    {"delta", f.delta},
                                    {"reason", f.reason},
                                    {"bits_tried", f.bits_tried}});
  if (!band_error.empty()) manifest["band_report_error"] = band_error;
  bool coupling_warn = false;
  for (double d : rc.sweep.deltas) coupling_warn = coupling_warn || d > 1.0;
  if (coupling_warn)
    manifest["warnings"] = {"coupling factor above 1: extrapolating the study"};
  manifest["wall_ms"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(t_end - t_start)
          .count();

  for (const auto& [path, content] : files) {
    if (!detail::write_file(path, content)) {
      art.exit_code = kExitIo;
      art.message = "cannot write " + path;
      detail::write_file(rc.out_dir + "/manifest.json", manifest.dump(2) + "\n");
      return art;
    }
    art.files.push_back(path);
  }
  // manifest is always written, even on partial failure
  if (!detail::write_file(rc.out_dir + "/manifest.json",
                          manifest.dump(2) + "\n")) {
    art.exit_code = kExitIo;
    art.message = "cannot write manifest";
    return art;
  }
  art.files.push_back(rc.out_dir + "/manifest.json");

  if (!table.failures.empty() || !table.invariants_ok || !band_error.empty()) {
    art.exit_code = kExitNumeric;
    art.message = "numeric invariants tripped or points failed (see manifest)";
  }
  return art;
}

}  // namespace thermobloch::cli
