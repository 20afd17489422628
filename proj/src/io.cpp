// Copyright 2026 The gkpkerr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gkpkerr/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gkpkerr/errors.hpp"

namespace gkpkerr {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string results_csv(const std::vector<ResultRow>& rows) {
  std::string out = std::string(kResultsHeader) + "\n";
  for (const auto& r : rows) {
    out += format_double(r.delta) + "," + format_double(r.gamma) + "," + std::to_string(r.n_rounds) + "," + r.decoder +
           "," + format_double(r.fidelity) + "," + format_double(r.infidelity) + "," + format_double(r.success_prob) +
           "," + std::to_string(r.dim) + "," + r.flags + "\n";
  }
  return out;
}

std::string wigner_csv(const WignerGrid& grid) {
  std::string out = "q,p,w\n";
  out.reserve(out.size() + static_cast<std::size_t>(grid.q.size() * grid.p.size()) * 64);
  for (Eigen::Index ip = 0; ip < grid.p.size(); ++ip) {
    for (Eigen::Index iq = 0; iq < grid.q.size(); ++iq) {
      out += format_double(grid.q(iq)) + "," + format_double(grid.p(ip)) + "," + format_double(grid.values(ip, iq)) +
             "\n";
    }
  }
  return out;
}

std::string codeword_csv(const Vector& amplitudes) {
  std::string out = "n,Re,Im\n";
  for (Eigen::Index n = 0; n < amplitudes.size(); ++n) {
    out += std::to_string(n) + "," + format_double(amplitudes(n).real()) + "," + format_double(amplitudes(n).imag()) +
           "\n";
  }
  return out;
}

std::string sbs_records_jsonl(const std::vector<SbsRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    nlohmann::ordered_json j;
    if (!r.point.empty()) j["point"] = r.point;
    j["round"] = r.round;
    j["syndrome"] = r.syndrome;
    j["outcome_model"] = r.outcome_model;
    j["pre_weight"] = r.pre_weight;
    j["post_weight"] = r.post_weight;
    j["round_prob"] = r.round_prob;
    out += j.dump() + "\n";
  }
  return out;
}

namespace {

std::string rgb(double t) {
  // t in [-1, 1]: blue through white to red.
  t = std::clamp(t, -1.0, 1.0);
  int r = 255, g = 255, b = 255;
  if (t > 0) {
    g = b = static_cast<int>(std::lround(255 * (1.0 - t)));
  } else {
    r = g = static_cast<int>(std::lround(255 * (1.0 + t)));
  }
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
  return buf;
}

std::string fixed(double v, int digits = 2) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

}  // namespace

std::string wigner_svg(const WignerGrid& grid, const std::string& title) {
  const int nq = static_cast<int>(grid.q.size()), np = static_cast<int>(grid.p.size());
  const int stride = std::max(1, (std::max(nq, np) + 100) / 101);
  const int cq = (nq + stride - 1) / stride, cp = (np + stride - 1) / stride;
  const double cell = 4.0, margin = 30.0;
  const double scale = std::max(grid.values.cwiseAbs().maxCoeff(), 1e-300);
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(2 * margin + cq * cell) << "\" height=\""
      << fixed(2 * margin + cp * cell) << "\">\n";
  svg << "<text x=\"" << fixed(margin) << "\" y=\"20\" font-family=\"sans-serif\" font-size=\"12\">" << title
      << "</text>\n";
  for (int jp = 0; jp < cp; ++jp) {
    for (int jq = 0; jq < cq; ++jq) {
      const double w = grid.values(jp * stride, jq * stride) / scale;
      // p increases upwards.
      svg << "<rect x=\"" << fixed(margin + jq * cell) << "\" y=\"" << fixed(margin + (cp - 1 - jp) * cell)
          << "\" width=\"4\" height=\"4\" fill=\"" << rgb(w) << "\"/>\n";
    }
  }
  svg << "<text x=\"" << fixed(margin + cq * cell / 2) << "\" y=\"" << fixed(2 * margin + cp * cell - 8)
      << "\" font-family=\"sans-serif\" font-size=\"11\">q</text>\n";
  svg << "<text x=\"8\" y=\"" << fixed(margin + cp * cell / 2)
      << "\" font-family=\"sans-serif\" font-size=\"11\">p</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

std::string loglog_svg(const std::vector<PlotSeries>& series, const std::string& title, const std::string& x_label,
                       const std::string& y_label) {
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!(s.x[i] > 0 && s.y[i] > 0)) continue;
      xmin = std::min(xmin, std::log10(s.x[i]));
      xmax = std::max(xmax, std::log10(s.x[i]));
      ymin = std::min(ymin, std::log10(s.y[i]));
      ymax = std::max(ymax, std::log10(s.y[i]));
    }
  }
  if (!(xmax >= xmin)) xmin = -1, xmax = 0;
  if (!(ymax >= ymin)) ymin = -1, ymax = 0;
  xmin = std::floor(xmin), xmax = std::max(std::ceil(xmax), xmin + 1);
  ymin = std::floor(ymin), ymax = std::max(std::ceil(ymax), ymin + 1);
  const double w = 480, h = 360, left = 70, top = 40, pw = w - left - 30, ph = h - top - 60;
  auto px = [&](double lx) { return left + pw * (lx - xmin) / (xmax - xmin); };
  auto py = [&](double ly) { return top + ph * (1.0 - (ly - ymin) / (ymax - ymin)); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(w) << "\" height=\"" << fixed(h) << "\">\n";
  svg << "<text x=\"" << fixed(left) << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"13\">" << title
      << "</text>\n";
  svg << "<rect x=\"" << fixed(left) << "\" y=\"" << fixed(top) << "\" width=\"" << fixed(pw) << "\" height=\""
      << fixed(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double e = xmin; e <= xmax + 1e-9; e += 1.0) {
    svg << "<text x=\"" << fixed(px(e) - 12) << "\" y=\"" << fixed(top + ph + 16)
        << "\" font-family=\"sans-serif\" font-size=\"10\">1e" << static_cast<int>(e) << "</text>\n";
  }
  for (double e = ymin; e <= ymax + 1e-9; e += 1.0) {
    svg << "<text x=\"" << fixed(left - 40) << "\" y=\"" << fixed(py(e) + 4)
        << "\" font-family=\"sans-serif\" font-size=\"10\">1e" << static_cast<int>(e) << "</text>\n";
  }
  svg << "<text x=\"" << fixed(left + pw / 2) << "\" y=\"" << fixed(h - 20)
      << "\" font-family=\"sans-serif\" font-size=\"11\">" << x_label << "</text>\n";
  svg << "<text x=\"6\" y=\"" << fixed(top - 8) << "\" font-family=\"sans-serif\" font-size=\"11\">" << y_label
      << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = colors[k % 6];
    std::string points;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!(s.x[i] > 0 && s.y[i] > 0)) continue;
      points += fixed(px(std::log10(s.x[i]))) + "," + fixed(py(std::log10(s.y[i]))) + " ";
    }
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"" << points << "\"/>\n";
    svg << "<text x=\"" << fixed(left + pw - 120) << "\" y=\"" << fixed(top + 14 + 14 * k) << "\" fill=\"" << color
        << "\" font-family=\"sans-serif\" font-size=\"10\">" << s.label << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void write_text(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(ErrorKind::kConfig, "cannot write '" + path + "'");
  out << content;
  if (!out) throw Error(ErrorKind::kConfig, "failed writing '" + path + "'");
}

}  // namespace gkpkerr
