// Copyright (c) thermobloch contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "thermobloch/sweep.hpp"

namespace thermobloch::cli {

// Deterministic SVG band-diagram emitter, style v1: fixed canvas, linear
// axes, one color per coupling factor (red/green/blue for the first three),
// Brillouin zone edges at k2r* = ±π. No external plotting dependency so the
// byte stream is reproducible and can be golden-tested.
struct SvgStyle {
  int width = 860;
  int height = 600;
  int margin_l = 70, margin_r = 24, margin_t = 36, margin_b = 52;
  double point_radius = 1.4;
  double k2i_clip = 40.0;  // symmetric x-limit for the k2i panel
  const char* version = "v1";
};

namespace svgdetail {

inline std::string fnum(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

inline std::string gnum(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline const char* delta_color(size_t idx) {
  static const char* palette[] = {"#d62728", "#2ca02c", "#1f77b4",
                                  "#ff7f0e", "#9467bd", "#8c564b"};
  return palette[idx % 6];
}

struct Frame {
  const SvgStyle& st;
  double x0, x1, y0, y1;  // data ranges
  double px(double x) const {
    double w = st.width - st.margin_l - st.margin_r;
    return st.margin_l + (x - x0) / (x1 - x0) * w;
  }
  double py(double y) const {
    double h = st.height - st.margin_t - st.margin_b;
    return st.height - st.margin_b - (y - y0) / (y1 - y0) * h;
  }
};

inline double nice_step(double range) {
  if (!(range > 0)) return 1;
  double raw = range / 5.0;
  double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double r = raw / mag;
  double step = r < 1.5 ? 1 : r < 3.5 ? 2 : r < 7.5 ? 5 : 10;
  return step * mag;
}

inline void open_svg(std::string& s, const SvgStyle& st, const std::string& title) {
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
       std::to_string(st.width) + "\" height=\"" + std::to_string(st.height) +
       "\" viewBox=\"0 0 " + std::to_string(st.width) + " " +
       std::to_string(st.height) + "\">\n";
  s += "<!-- thermobloch plot style " + std::string(st.version) + " -->\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + fnum(st.width / 2.0) +
       "\" y=\"22\" font-family=\"sans-serif\" font-size=\"15\" "
       "text-anchor=\"middle\">" + title + "</text>\n";
}

inline void axes(std::string& s, const Frame& f, const std::string& xlabel,
                 const std::string& ylabel) {
  const SvgStyle& st = f.st;
  double xl = st.margin_l, xr = st.width - st.margin_r;
  double yt = st.margin_t, yb = st.height - st.margin_b;
  s += "<rect x=\"" + fnum(xl) + "\" y=\"" + fnum(yt) + "\" width=\"" +
       fnum(xr - xl) + "\" height=\"" + fnum(yb - yt) +
       "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  double sx = nice_step(f.x1 - f.x0);
  for (double t = std::ceil(f.x0 / sx) * sx; t <= f.x1 + 1e-12 * sx; t += sx) {
    double p = f.px(t);
    s += "<line x1=\"" + fnum(p) + "\" y1=\"" + fnum(yb) + "\" x2=\"" + fnum(p) +
         "\" y2=\"" + fnum(yb + 5) + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + fnum(p) + "\" y=\"" + fnum(yb + 18) +
         "\" font-family=\"sans-serif\" font-size=\"11\" "
         "text-anchor=\"middle\">" + gnum(t) + "</text>\n";
  }
  double sy = nice_step(f.y1 - f.y0);
  for (double t = std::ceil(f.y0 / sy) * sy; t <= f.y1 + 1e-12 * sy; t += sy) {
    double p = f.py(t);
    s += "<line x1=\"" + fnum(xl - 5) + "\" y1=\"" + fnum(p) + "\" x2=\"" +
         fnum(xl) + "\" y2=\"" + fnum(p) + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + fnum(xl - 8) + "\" y=\"" + fnum(p + 4) +
         "\" font-family=\"sans-serif\" font-size=\"11\" "
         "text-anchor=\"end\">" + gnum(t) + "</text>\n";
  }
  s += "<text x=\"" + fnum((xl + xr) / 2) + "\" y=\"" +
       fnum(yb + 38.0) +
       "\" font-family=\"sans-serif\" font-size=\"13\" "
       "text-anchor=\"middle\">" + xlabel + "</text>\n";
  s += "<text x=\"16\" y=\"" + fnum((yt + yb) / 2) +
       "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" "
       "transform=\"rotate(-90 16 " + fnum((yt + yb) / 2) + ")\">" + ylabel +
       "</text>\n";
}

inline void no_points(std::string& s, const SvgStyle& st) {
  s += "<text x=\"" + fnum(st.width / 2.0) + "\" y=\"" +
       fnum(st.height / 2.0) +
       "\" font-family=\"sans-serif\" font-size=\"16\" fill=\"#888\" "
       "text-anchor=\"middle\">no points</text>\n";
}

inline std::vector<double> distinct_deltas(const spectrum::SpectrumTable& t) {
  std::vector<double> d;
  for (const auto& p : t.points)
    if (d.empty() || d.back() != p.delta) {
      bool seen = false;
      for (double e : d) seen = seen || e == p.delta;
      if (!seen) d.push_back(p.delta);
    }
  std::sort(d.begin(), d.end());
  return d;
}

inline void legend(std::string& s, const SvgStyle& st,
                   const std::vector<double>& deltas) {
  double x = st.width - st.margin_r - 110.0;
  double y = st.margin_t + 14.0;
  for (size_t i = 0; i < deltas.size(); ++i) {
    s += "<circle cx=\"" + fnum(x) + "\" cy=\"" + fnum(y - 4) +
         "\" r=\"3.5\" fill=\"" + delta_color(i) + "\"/>\n";
    s += "<text x=\"" + fnum(x + 9) + "\" y=\"" + fnum(y) +
         "\" font-family=\"sans-serif\" font-size=\"12\">&#948; = " +
         gnum(deltas[i]) + "</text>\n";
    y += 16;
  }
}

}  // namespace svgdetail

// k2r* - ω* panel: the propagation band structure with zone edges at ±π.
inline std::string svg_spectrum_k2r(const spectrum::SpectrumTable& table,
                                    const SvgStyle& st = {}) {
  using namespace svgdetail;
  std::string s;
  open_svg(s, st, "band structure: k2r* vs omega*");
  const double pi = 3.14159265358979323846;
  double wmax = 1;
  bool any = false;
  for (const auto& p : table.points) {
    wmax = std::max(wmax, p.omega_star);
    any = true;
  }
  Frame f{st, -pi * 1.05, pi * 1.05, 0.0, wmax * 1.02};
  axes(s, f, "k2r* = k2r L", "omega* = omega / omega_ref");
  for (double edge : {-pi, pi}) {
    s += "<line x1=\"" + fnum(f.px(edge)) + "\" y1=\"" + fnum(f.py(f.y0)) +
         "\" x2=\"" + fnum(f.px(edge)) + "\" y2=\"" + fnum(f.py(f.y1)) +
         "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";
  }
  if (!any) {
    no_points(s, st);
    s += "</svg>\n";
    return s;
  }
  auto deltas = distinct_deltas(table);
  for (size_t di = 0; di < deltas.size(); ++di) {
    for (const auto& p : table.points) {
      if (p.delta != deltas[di]) continue;
      s += "<circle cx=\"" + fnum(f.px(p.k2r_star)) + "\" cy=\"" +
           fnum(f.py(p.omega_star)) + "\" r=\"" + fnum(st.point_radius) +
           "\" fill=\"" + delta_color(di) + "\" fill-opacity=\"0.75\"/>\n";
    }
  }
  legend(s, st, deltas);
  s += "</svg>\n";
  return s;
}

// k2i* - ω* panel: spatial attenuation branches, clipped to the style range.
inline std::string svg_spectrum_k2i(const spectrum::SpectrumTable& table,
                                    const SvgStyle& st = {}) {
  using namespace svgdetail;
  std::string s;
  open_svg(s, st, "spatial damping: k2i* vs omega*");
  double wmax = 1, imax = 0;
  bool any = false;
  for (const auto& p : table.points) {
    wmax = std::max(wmax, p.omega_star);
    if (std::fabs(p.k2i_star) <= st.k2i_clip)
      imax = std::max(imax, std::fabs(p.k2i_star));
    any = true;
  }
  if (imax <= 0) imax = 1;
  Frame f{st, -imax * 1.05, imax * 1.05, 0.0, wmax * 1.02};
  axes(s, f, "k2i* = k2i L", "omega* = omega / omega_ref");
  if (!any) {
    no_points(s, st);
    s += "</svg>\n";
    return s;
  }
  auto deltas = distinct_deltas(table);
  for (size_t di = 0; di < deltas.size(); ++di) {
    for (const auto& p : table.points) {
      if (p.delta != deltas[di]) continue;
      if (std::fabs(p.k2i_star) > st.k2i_clip) continue;
      s += "<circle cx=\"" + fnum(f.px(p.k2i_star)) + "\" cy=\"" +
           fnum(f.py(p.omega_star)) + "\" r=\"" + fnum(st.point_radius) +
           "\" fill=\"" + delta_color(di) + "\" fill-opacity=\"0.75\"/>\n";
    }
  }
  legend(s, st, deltas);
  s += "</svg>\n";
  return s;
}

// First pass band / first gap width and mean frequency against δ.
inline std::string svg_bands_vs_delta(
    const std::vector<spectrum::BandReport>& reports,
    spectrum::WaveFamily family, const SvgStyle& st = {}) {
  using namespace svgdetail;
  std::string s;
  open_svg(s, st, std::string("first pass band and gap vs delta (") +
                      spectrum::family_name(family) + ")");
  struct Row {
    double delta, wp, wb, mp, mb;
  };
  std::vector<Row> rows;
  for (const auto& rep : reports) {
    if (rep.family != family) continue;
    const spectrum::BandInterval* pass = nullptr;
    const spectrum::BandInterval* gap = nullptr;
    for (const auto& iv : rep.intervals) {
      if (!iv.gap && !pass) pass = &iv;
      if (iv.gap && !gap) gap = &iv;
    }
    if (pass && gap)
      rows.push_back({rep.delta, pass->width(), gap->width(), pass->mean(),
                      gap->mean()});
  }
  std::sort(rows.begin(), rows.end(),
            [](const Row& a, const Row& b) { return a.delta < b.delta; });
  if (rows.empty()) {
    no_points(s, st);
    s += "</svg>\n";
    return s;
  }
  // two stacked panels sharing the delta axis
  double dmin = rows.front().delta, dmax = rows.back().delta;
  if (dmax <= dmin) dmax = dmin + 1;
  auto panel = [&](double y_top, double y_bot, bool widths) {
    double vmin = 1e300, vmax = -1e300;
    for (const auto& r : rows) {
      double a = widths ? r.wp : r.mp;
      double b = widths ? r.wb : r.mb;
      vmin = std::min({vmin, a, b});
      vmax = std::max({vmax, a, b});
    }
    if (vmax <= vmin) vmax = vmin + 1;
    double pad = 0.06 * (vmax - vmin);
    SvgStyle sub = st;
    sub.margin_t = static_cast<int>(y_top);
    sub.margin_b = static_cast<int>(st.height - y_bot);
    Frame f{sub, dmin - 0.02, dmax + 0.02, vmin - pad, vmax + pad};
    axes(s, f, widths ? "" : "coupling factor delta",
         widths ? "width A*" : "mean omega*");
    const char* cp = "#17becf";
    const char* cb = "#d62728";
    for (int series = 0; series < 2; ++series) {
      std::string path = "<path d=\"";
      for (size_t i = 0; i < rows.size(); ++i) {
        double v = series == 0 ? (widths ? rows[i].wp : rows[i].mp)
                               : (widths ? rows[i].wb : rows[i].mb);
        path += (i == 0 ? "M" : "L");
        path += fnum(f.px(rows[i].delta)) + " " + fnum(f.py(v)) + " ";
      }
      path += std::string("\" fill=\"none\" stroke=\"") +
              (series == 0 ? cp : cb) + "\" stroke-width=\"1.6\"/>\n";
      s += path;
      for (size_t i = 0; i < rows.size(); ++i) {
        double v = series == 0 ? (widths ? rows[i].wp : rows[i].mp)
                               : (widths ? rows[i].wb : rows[i].mb);
        s += "<circle cx=\"" + fnum(f.px(rows[i].delta)) + "\" cy=\"" +
             fnum(f.py(v)) + "\" r=\"3\" fill=\"" + (series == 0 ? cp : cb) +
             "\"/>\n";
      }
    }
    s += "<text x=\"" + fnum(st.margin_l + 8.0) + "\" y=\"" +
         fnum(y_top + 16.0) +
         "\" font-family=\"sans-serif\" font-size=\"12\">" +
         (widths ? "pass band (cyan), gap (red): widths" :
                   "pass band (cyan), gap (red): mean frequencies") +
         "</text>\n";
  };
  panel(st.margin_t, st.height / 2.0 - 12.0, true);
  panel(st.height / 2.0 + 26.0, st.height - st.margin_b, false);
  s += "</svg>\n";
  return s;
}

}  // namespace thermobloch::cli
