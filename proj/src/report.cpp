// Copyright 2026 The lindctl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lindctl/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace lindctl {

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string g9(double v) { return fmt("%.9g", v); }
std::string f2(double v) { return fmt("%.2f", v); }

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  for (std::string f; std::getline(ss, f, ',');) out.push_back(f);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

// Method colors, fixed so the output is byte-stable.
std::string_view color(Method m) {
  switch (m) {
    case Method::ga:
      return "#d62728";
    case Method::machnes_gradient:
      return "#1f77b4";
    case Method::split_gradient:
      return "#2ca02c";
  }
  return "#000000";
}

}  // namespace

std::string format_csv(const std::vector<SweepRecord>& records) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : records) {
    out += std::string(1, r.scenario) + ',' + std::string(to_string(r.method)) + ',' +
           std::string(to_string(r.noise)) + ',' + g9(r.gamma) + ',' + std::to_string(r.seed) +
           ',' + std::to_string(r.num_pulses) + ',' + g9(r.dt) + ',' + g9(r.superop_fidelity) +
           ',' + g9(r.state_fitness) + ',' + std::to_string(r.iterations) + ',' +
           g9(r.wall_time_s) + '\n';
  }
  return out;
}

void emit_csv(const std::vector<SweepRecord>& records, const std::filesystem::path& path) {
  write_file(path, format_csv(records));
}

std::vector<SweepRecord> parse_csv(std::string_view text) {
  std::stringstream ss{std::string(text)};
  std::string line;
  if (!std::getline(ss, line) || line != kCsvHeader) {
    throw std::invalid_argument("CSV header does not match the sweep record layout");
  }
  std::vector<SweepRecord> out;
  std::size_t lineno = 1;
  while (std::getline(ss, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split_fields(line);
    if (f.size() != 11 || f[0].size() != 1) {
      throw std::invalid_argument("CSV line " + std::to_string(lineno) + " is malformed");
    }
    try {
      SweepRecord r;
      r.scenario = f[0][0];
      r.method = parse_method(f[1]);
      r.noise = parse_noise_kind(f[2]);
      r.gamma = std::stod(f[3]);
      r.seed = std::stoull(f[4]);
      r.num_pulses = std::stoull(f[5]);
      r.dt = std::stod(f[6]);
      r.superop_fidelity = std::stod(f[7]);
      r.state_fitness = std::stod(f[8]);
      r.iterations = std::stoull(f[9]);
      r.wall_time_s = std::stod(f[10]);
      out.push_back(std::move(r));
    } catch (const std::exception& e) {
      throw std::invalid_argument("CSV line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::vector<SweepRecord> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path,
                                   const SweepRecord& r) {
  auto dir = csv_path;
  dir += ".pulses";
  const std::string name = std::string(1, r.scenario) + '_' + std::string(to_string(r.method)) +
                           '_' + std::string(to_string(r.noise)) + "_g" + g9(r.gamma) + "_s" +
                           std::to_string(r.seed) + ".txt";
  return dir / name;
}

void write_pulse_sidecars(const std::vector<SweepRecord>& records,
                          const std::filesystem::path& csv_path) {
  for (const auto& r : records) {
    std::string body;
    for (double v : r.pulses) body += fmt("%.17g", v) + '\n';
    write_file(sidecar_path(csv_path, r), body);
  }
}

std::vector<double> read_pulses(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<double> out;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) out.push_back(std::stod(line));
  }
  return out;
}

std::string render_svg(const std::vector<SweepRecord>& records) {
  if (records.empty()) throw std::invalid_argument("render_svg: no records to plot");

  // panel -> method -> gamma -> scores over seeds
  using Series = std::map<double, std::vector<double>>;
  std::map<std::pair<char, NoiseKind>, std::map<Method, Series>> panels;
  std::set<Method> methods;
  double gmin = INFINITY;
  double gmax = -INFINITY;
  for (const auto& r : records) {
    auto& panel = panels[{r.scenario, r.noise}];
    methods.insert(r.method);
    if (!(r.gamma > 0.0)) {
      panel[r.method];  // keep the panel even if nothing is drawable
      continue;
    }
    panel[r.method][r.gamma].push_back(r.state_fitness);
    gmin = std::min(gmin, r.gamma);
    gmax = std::max(gmax, r.gamma);
  }
  double lx0 = std::isfinite(gmin) ? std::floor(std::log10(gmin)) : -4.0;
  double lx1 = std::isfinite(gmax) ? std::ceil(std::log10(gmax)) : 0.0;
  if (lx1 <= lx0) lx1 = lx0 + 1.0;

  constexpr double kPanelW = 360, kPanelH = 260;
  constexpr double kLeft = 50, kRight = 15, kTop = 30, kBottom = 40;
  const std::size_t cols = std::min<std::size_t>(3, panels.size());
  const std::size_t rows = (panels.size() + cols - 1) / cols;
  const double legend_h = 24.0 + 18.0 * static_cast<double>(methods.size());
  const double width = kPanelW * static_cast<double>(cols);
  const double height = kPanelH * static_cast<double>(rows) + legend_h;

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f2(width) << "\" height=\""
      << f2(height) << "\" viewBox=\"0 0 " << f2(width) << ' ' << f2(height)
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << f2(width) << "\" height=\"" << f2(height)
      << "\" fill=\"white\"/>\n";

  std::size_t index = 0;
  for (const auto& [key, series] : panels) {
    const double ox = kPanelW * static_cast<double>(index % cols);
    const double oy = kPanelH * static_cast<double>(index / cols);
    const double px0 = ox + kLeft, px1 = ox + kPanelW - kRight;
    const double py0 = oy + kTop, py1 = oy + kPanelH - kBottom;
    auto sx = [&](double g) { return px0 + (std::log10(g) - lx0) / (lx1 - lx0) * (px1 - px0); };
    auto sy = [&](double f) { return py1 - std::clamp(f, 0.0, 1.0) * (py1 - py0); };

    svg << "<g class=\"panel\" id=\"panel-" << key.first << '-' << to_string(key.second)
        << "\">\n"
        << "<text x=\"" << f2((px0 + px1) / 2) << "\" y=\"" << f2(oy + 18)
        << "\" text-anchor=\"middle\">scenario " << key.first << " (" << to_string(key.second)
        << ")</text>\n"
        << "<rect x=\"" << f2(px0) << "\" y=\"" << f2(py0) << "\" width=\"" << f2(px1 - px0)
        << "\" height=\"" << f2(py1 - py0) << "\" fill=\"none\" stroke=\"#444\"/>\n";
    for (double e = lx0; e <= lx1 + 1e-9; e += 1.0) {
      const double x = sx(std::pow(10.0, e));
      svg << "<line x1=\"" << f2(x) << "\" y1=\"" << f2(py1) << "\" x2=\"" << f2(x)
          << "\" y2=\"" << f2(py1 + 4) << "\" stroke=\"#444\"/>"
          << "<text x=\"" << f2(x) << "\" y=\"" << f2(py1 + 16)
          << "\" text-anchor=\"middle\">1e" << static_cast<int>(e) << "</text>\n";
    }
    for (int t = 0; t <= 4; ++t) {
      const double f = 0.25 * t;
      svg << "<line x1=\"" << f2(px0 - 4) << "\" y1=\"" << f2(sy(f)) << "\" x2=\"" << f2(px0)
          << "\" y2=\"" << f2(sy(f)) << "\" stroke=\"#444\"/>"
          << "<text x=\"" << f2(px0 - 7) << "\" y=\"" << f2(sy(f) + 4)
          << "\" text-anchor=\"end\">" << f2(f) << "</text>\n";
    }
    svg << "<text x=\"" << f2((px0 + px1) / 2) << "\" y=\"" << f2(py1 + 32)
        << "\" text-anchor=\"middle\">gamma</text>\n";
    for (const auto& [method, points] : series) {
      if (points.empty()) continue;
      svg << "<polyline class=\"series\" data-method=\"" << to_string(method)
          << "\" fill=\"none\" stroke=\"" << color(method) << "\" stroke-width=\"1.5\" points=\"";
      bool first = true;
      for (const auto& [g, scores] : points) {
        double mean = 0.0;
        for (double s : scores) mean += s;
        mean /= static_cast<double>(scores.size());
        svg << (first ? "" : " ") << f2(sx(g)) << ',' << f2(sy(mean));
        first = false;
      }
      svg << "\"/>\n";
    }
    svg << "</g>\n";
    ++index;
  }

  svg << "<g class=\"legend\">\n";
  double ly = kPanelH * static_cast<double>(rows) + 18.0;
  for (auto m : methods) {
    svg << "<line x1=\"20.00\" y1=\"" << f2(ly - 4) << "\" x2=\"44.00\" y2=\"" << f2(ly - 4)
        << "\" stroke=\"" << color(m) << "\" stroke-width=\"2\"/>"
        << "<text x=\"50.00\" y=\"" << f2(ly) << "\">" << to_string(m) << "</text>\n";
    ly += 18.0;
  }
  svg << "</g>\n</svg>\n";
  return svg.str();
}

void emit_plot(const std::vector<SweepRecord>& records, const std::filesystem::path& path) {
  write_file(path, render_svg(records));
}

}  // namespace lindctl
