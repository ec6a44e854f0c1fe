// Copyright (c) thermobloch contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "thermobloch/sweep.hpp"

namespace thermobloch::cli {

using nlohmann::json;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BandConfig {
  bool enabled = true;
  std::vector<spectrum::WaveFamily> families = {
      spectrum::WaveFamily::shear, spectrum::WaveFamily::compressional};
  double edge_rel_tol = 1e-6;
};

struct RunConfig {
  transfer::CellSpec cell;
  spectrum::SweepConfig sweep;
  BandConfig bands;
  spectrum::InvariantGates gates;
  std::string out_dir = "out";
  bool plots = false;
  json effective;  // defaults applied, echoed into the manifest
};

namespace detail {

inline void reject_unknown(const json& j, const std::string& path,
                           const std::set<std::string>& allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key()))
      throw ConfigError(path + ": unknown key '" + it.key() + "'");
  }
}

inline double need_number(const json& j, const std::string& path,
                          const std::string& key) {
  if (!j.contains(key)) throw ConfigError(path + "." + key + ": required");
  if (!j[key].is_number()) throw ConfigError(path + "." + key + ": number expected");
  return j[key].get<double>();
}

inline double opt_number(const json& j, const std::string& path,
                         const std::string& key, double dflt) {
  if (!j.contains(key)) return dflt;
  if (!j[key].is_number()) throw ConfigError(path + "." + key + ": number expected");
  return j[key].get<double>();
}

inline materials::PhaseInput parse_phase(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path + ": object expected");
  reject_unknown(j, path,
                 {"E", "nu", "rho", "Kt", "C", "alpha_t", "beta_t", "T0",
                  "D_over_q", "q_over_p", "psi_over_p", "q", "psi", "D"});
  materials::PhaseInput p;
  p.E = need_number(j, path, "E");
  p.nu = need_number(j, path, "nu");
  p.rho = need_number(j, path, "rho");
  p.Kt = need_number(j, path, "Kt");
  p.C_spec = need_number(j, path, "C");
  p.alpha_t = need_number(j, path, "alpha_t");
  p.beta_t = opt_number(j, path, "beta_t", p.alpha_t / 10.0);
  p.T0 = opt_number(j, path, "T0", 293.15);
  p.D_over_q = opt_number(j, path, "D_over_q", 0.0);
  p.q_over_p = opt_number(j, path, "q_over_p", 0.1);
  p.psi_over_p = opt_number(j, path, "psi_over_p", 1.0 / 3.0);
  if (j.contains("q")) p.q_direct = j["q"].get<double>();
  if (j.contains("psi")) p.psi_direct = j["psi"].get<double>();
  if (j.contains("D")) p.D_direct = j["D"].get<double>();
  return p;
}

inline std::vector<double> parse_omega(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path + ": object expected");
  reject_unknown(j, path, {"grids"});
  if (!j.contains("grids") || !j["grids"].is_array() || j["grids"].empty())
    throw ConfigError(path + ".grids: non-empty array expected");
  std::vector<double> omega;
  int gi = 0;
  for (const auto& g : j["grids"]) {
    std::string gp = path + ".grids[" + std::to_string(gi++) + "]";
    if (!g.is_object()) throw ConfigError(gp + ": object expected");
    std::string kind = g.value("kind", "");
    if (kind == "log" || kind == "linear") {
      reject_unknown(g, gp, {"kind", "from", "to", "count"});
      double from = need_number(g, gp, "from");
      double to = need_number(g, gp, "to");
      int count = static_cast<int>(need_number(g, gp, "count"));
      if (count < 2) throw ConfigError(gp + ".count: at least 2");
      if (!(to > from)) throw ConfigError(gp + ": 'to' must exceed 'from'");
      if (kind == "log" && !(from > 0))
        throw ConfigError(gp + ": log grid needs from > 0");
      for (int i = 0; i < count; ++i) {
        double t = static_cast<double>(i) / (count - 1);
        omega.push_back(kind == "log"
                            ? from * std::pow(to / from, t)
                            : from + (to - from) * t);
      }
    } else if (kind == "explicit") {
      reject_unknown(g, gp, {"kind", "values"});
      if (!g.contains("values") || !g["values"].is_array())
        throw ConfigError(gp + ".values: array expected");
      for (const auto& v : g["values"]) omega.push_back(v.get<double>());
    } else {
      throw ConfigError(gp + ".kind: one of log|linear|explicit");
    }
  }
  std::sort(omega.begin(), omega.end());
  omega.erase(std::unique(omega.begin(), omega.end()), omega.end());
  return omega;
}

inline spectrum::WaveFamily parse_family(const std::string& s,
                                         const std::string& path) {
  using spectrum::WaveFamily;
  if (s == "shear") return WaveFamily::shear;
  if (s == "compressional") return WaveFamily::compressional;
  if (s == "thermal") return WaveFamily::thermal;
  if (s == "diffusive") return WaveFamily::diffusive;
  throw ConfigError(path + ": unknown family '" + s + "'");
}

}  // namespace detail

inline spectrum::PrecisionMode parse_precision(const std::string& s) {
  if (s == "double") return spectrum::PrecisionMode::double53;
  if (s == "dd") return spectrum::PrecisionMode::dd;
  if (s == "qd") return spectrum::PrecisionMode::qd;
  if (s == "auto") return spectrum::PrecisionMode::adaptive;
  throw ConfigError("precision: one of double|dd|qd|auto");
}

inline RunConfig parse_config_json(const json& root) {
  if (!root.is_object()) throw ConfigError("config: object expected");
  detail::reject_unknown(root, "config",
                         {"cell", "sweep", "precision", "exp_method",
                          "crosscheck_qr", "qr_fallback", "threads", "bands",
                          "outputs", "plots", "gates"});
  RunConfig rc;

  if (!root.contains("cell")) throw ConfigError("cell: required");
  const json& jc = root["cell"];
  detail::reject_unknown(jc, "cell", {"layers"});
  if (!jc.contains("layers") || !jc["layers"].is_array() || jc["layers"].empty())
    throw ConfigError("cell.layers: at least one layer required");
  int li = 0;
  for (const auto& jl : jc["layers"]) {
    std::string lp = "cell.layers[" + std::to_string(li++) + "]";
    detail::reject_unknown(jl, lp, {"thickness", "phase"});
    double th = detail::need_number(jl, lp, "thickness");
    if (!(th > 0)) throw ConfigError(lp + ".thickness: must be positive");
    if (!jl.contains("phase")) throw ConfigError(lp + ".phase: required");
    materials::PhaseInput pin = detail::parse_phase(jl["phase"], lp + ".phase");
    materials::PhaseCoefficients pc;
    try {
      pc = materials::derive_coefficients(pin);
    } catch (const materials::InvalidMaterialError& e) {
      throw ConfigError(lp + ".phase: " + e.what());
    }
    rc.cell.layers.push_back({pc, th});
  }

  if (!root.contains("sweep")) throw ConfigError("sweep: required");
  const json& js = root["sweep"];
  detail::reject_unknown(js, "sweep",
                         {"omega_star", "k1_star", "deltas", "eps_band"});
  if (!js.contains("omega_star")) throw ConfigError("sweep.omega_star: required");
  rc.sweep.omega_star = detail::parse_omega(js["omega_star"], "sweep.omega_star");
  rc.sweep.k1_star = detail::opt_number(js, "sweep", "k1_star", 0.0);
  if (js.contains("deltas")) {
    if (!js["deltas"].is_array() || js["deltas"].empty())
      throw ConfigError("sweep.deltas: non-empty array expected");
    rc.sweep.deltas.clear();
    for (const auto& d : js["deltas"]) {
      double dv = d.get<double>();
      if (dv < 0) throw ConfigError("sweep.deltas: delta must be >= 0");
      rc.sweep.deltas.push_back(dv);
    }
  }
  rc.sweep.eps_band = detail::opt_number(js, "sweep", "eps_band", 1e-6);

  std::string prec = root.value("precision", "dd");
  rc.sweep.precision.mode = parse_precision(prec);
  std::string em = root.value("exp_method", "auto");
  if (em == "auto")
    rc.sweep.exp_method = transfer::ExpMethod::automatic;
  else if (em == "eigen")
    rc.sweep.exp_method = transfer::ExpMethod::eigen;
  else if (em == "series")
    rc.sweep.exp_method = transfer::ExpMethod::series;
  else
    throw ConfigError("exp_method: one of auto|eigen|series");
  rc.sweep.crosscheck_qr = root.value("crosscheck_qr", false);
  rc.sweep.precision.qr_fallback = root.value("qr_fallback", false);
  rc.sweep.threads = root.value("threads", 0);

  if (root.contains("bands")) {
    const json& jb = root["bands"];
    detail::reject_unknown(jb, "bands", {"enabled", "families", "edge_rel_tol"});
    rc.bands.enabled = jb.value("enabled", true);
    rc.bands.edge_rel_tol = detail::opt_number(jb, "bands", "edge_rel_tol", 1e-6);
    if (jb.contains("families")) {
      rc.bands.families.clear();
      for (const auto& f : jb["families"])
        rc.bands.families.push_back(
            detail::parse_family(f.get<std::string>(), "bands.families"));
    }
  }

  if (root.contains("outputs")) {
    const json& jo = root["outputs"];
    detail::reject_unknown(jo, "outputs", {"dir"});
    rc.out_dir = jo.value("dir", "out");
  }
  rc.plots = root.value("plots", false);

  if (root.contains("gates")) {
    const json& jg = root["gates"];
    detail::reject_unknown(jg, "gates", {"det_residual", "reciprocity"});
    rc.gates.det_residual = detail::opt_number(jg, "gates", "det_residual", 1e-18);
    rc.gates.reciprocity = detail::opt_number(jg, "gates", "reciprocity", 1e-12);
  }

  // physical validity beyond schema checks
  try {
    rc.cell.validate();
    rc.sweep.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  // effective config with defaults applied (manifest echo + hashing)
  json eff = root;
  eff["precision"] = prec;
  eff["exp_method"] = em;
  eff["crosscheck_qr"] = rc.sweep.crosscheck_qr;
  eff["qr_fallback"] = rc.sweep.precision.qr_fallback;
  eff["threads"] = rc.sweep.threads;
  eff["plots"] = rc.plots;
  if (!eff.contains("outputs")) eff["outputs"] = {{"dir", rc.out_dir}};
  rc.effective = std::move(eff);
  return rc;
}

inline RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    // byte offset -> line/column for the message
    size_t line = 1, col = 1;
    for (size_t i = 0; i < text.size() && i + 1 < e.byte; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError("config parse error at line " + std::to_string(line) +
                      ", column " + std::to_string(col) + ": " + e.what());
  }
  return parse_config_json(root);
}

// FNV-1a over the canonically serialized effective config.
inline std::string config_hash(const json& j) {
  std::string s = j.dump();
  unsigned long long h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", h);
  return buf;
}

}  // namespace thermobloch::cli
