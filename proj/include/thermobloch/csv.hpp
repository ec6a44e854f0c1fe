// Copyright (c) thermobloch contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdio>
#include <string>

#include "thermobloch/sweep.hpp"

namespace thermobloch::cli {

// Floats are serialized with 17 significant digits: enough for an exact
// double round trip, and deterministic for byte-wise comparisons.
inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string point_flags(const spectrum::SpectrumPoint& p) {
  std::string f = p.propagating ? "propagating" : "evanescent";
  if (p.inhomogeneous) f += ";inhomogeneous";
  if (p.escalated) f += ";escalated";
  if (p.qr_route) f += ";qr_route";
  if (p.series_exp) f += ";series_exp";
  return f;
}

inline const char kSpectrumHeader[] =
    "omega_star,delta,k1_star,branch,lambda_re,lambda_im,k2r_star,k2i_star,"
    "family,flags";

inline std::string spectrum_csv(const spectrum::SpectrumTable& table,
                                double delta_filter) {
  std::string out(kSpectrumHeader);
  out += '\n';
  for (const auto& p : table.points) {
    if (p.delta != delta_filter) continue;
    out += fmt17(p.omega_star);
    out += ',';
    out += fmt17(p.delta);
    out += ',';
    out += fmt17(p.k1_star);
    out += ',';
    out += std::to_string(p.branch);
    out += ',';
    out += fmt17(p.lambda_re);
    out += ',';
    out += fmt17(p.lambda_im);
    out += ',';
    out += fmt17(p.k2r_star);
    out += ',';
    out += fmt17(p.k2i_star);
    out += ',';
    out += spectrum::family_name(p.family);
    out += ',';
    out += point_flags(p);
    out += '\n';
  }
  return out;
}

inline const char kBandHeader[] =
    "family,delta,band_index,kind,omega_lo_star,omega_hi_star,width_star,"
    "mean_star";

inline std::string band_csv(const std::vector<spectrum::BandReport>& reports) {
  std::string out(kBandHeader);
  out += '\n';
  for (const auto& rep : reports) {
    for (const auto& iv : rep.intervals) {
      out += spectrum::family_name(rep.family);
      out += ',';
      out += fmt17(rep.delta);
      out += ',';
      out += std::to_string(iv.index);
      out += ',';
      out += iv.gap ? "gap" : "pass";
      out += ',';
      out += fmt17(iv.omega_lo);
      out += ',';
      out += fmt17(iv.omega_hi);
      out += ',';
      out += fmt17(iv.width());
      out += ',';
      out += fmt17(iv.mean());
      out += '\n';
    }
  }
  return out;
}

// Re-parse a spectrum CSV (used by the plotting layer and the round-trip
// checks). Only the columns of the contract are recovered.
inline std::vector<spectrum::SpectrumPoint> parse_spectrum_csv(
    const std::string& text) {
  std::vector<spectrum::SpectrumPoint> rows;
  size_t pos = text.find('\n');
  if (pos == std::string::npos) return rows;
  ++pos;
  while (pos < text.size()) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    std::string line = text.substr(pos, eol - pos);
    pos = eol + 1;
    if (line.empty()) continue;
    std::array<std::string, 10> cols;
    size_t c = 0, start = 0;
    for (size_t i = 0; i <= line.size() && c < 10; ++i) {
      if (i == line.size() || line[i] == ',') {
        cols[c++] = line.substr(start, i - start);
        start = i + 1;
      }
    }
    spectrum::SpectrumPoint p;
    p.omega_star = std::strtod(cols[0].c_str(), nullptr);
    p.delta = std::strtod(cols[1].c_str(), nullptr);
    p.k1_star = std::strtod(cols[2].c_str(), nullptr);
    p.branch = std::atoi(cols[3].c_str());
    p.lambda_re = std::strtod(cols[4].c_str(), nullptr);
    p.lambda_im = std::strtod(cols[5].c_str(), nullptr);
    p.k2r_star = std::strtod(cols[6].c_str(), nullptr);
    p.k2i_star = std::strtod(cols[7].c_str(), nullptr);
    for (int f = 0; f < 5; ++f)
      if (cols[8] == spectrum::family_name(static_cast<spectrum::WaveFamily>(f)))
        p.family = static_cast<spectrum::WaveFamily>(f);
    p.propagating = cols[9].rfind("propagating", 0) == 0;
    p.inhomogeneous = cols[9].find("inhomogeneous") != std::string::npos;
    p.escalated = cols[9].find("escalated") != std::string::npos;
    p.qr_route = cols[9].find("qr_route") != std::string::npos;
    p.series_exp = cols[9].find("series_exp") != std::string::npos;
    rows.push_back(p);
  }
  return rows;
}

}  // namespace thermobloch::cli
