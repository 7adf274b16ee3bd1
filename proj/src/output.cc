// Copyright 2026 The Poison Authors. All rights reserved.
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

#include "poison/output.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "poison/errors.h"
#include "poison/io.h"

namespace poison {
namespace {

namespace fs = std::filesystem;

constexpr double kWidth = 640.0;
constexpr double kHeight = 400.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

const char* const kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                "#bcbd22", "#17becf"};

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string Tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

std::string Escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '&':
        out += "&amp;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

void Header(std::ostringstream& svg, const std::string& title) {
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
      << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << Num(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\""
      << " font-size=\"14\">" << Escape(title) << "</text>\n";
}

void Axes(std::ostringstream& svg, const std::string& x_label,
          const std::string& y_label) {
  const double x0 = kLeft, y0 = kHeight - kBottom;
  svg << "<line x1=\"" << Num(x0) << "\" y1=\"" << Num(y0) << "\" x2=\""
      << Num(kWidth - kRight) << "\" y2=\"" << Num(y0)
      << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << Num(x0) << "\" y1=\"" << Num(kTop) << "\" x2=\""
      << Num(x0) << "\" y2=\"" << Num(y0) << "\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << Num((kLeft + kWidth - kRight) / 2) << "\" y=\""
      << Num(kHeight - 12) << "\" text-anchor=\"middle\">" << Escape(x_label)
      << "</text>\n";
  svg << "<text x=\"16\" y=\"" << Num((kTop + y0) / 2)
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << Num((kTop + y0) / 2) << ")\">" << Escape(y_label) << "</text>\n";
}

void YTicks(std::ostringstream& svg, double lo, double hi) {
  const double y0 = kHeight - kBottom;
  for (int i = 0; i <= 4; ++i) {
    const double v = lo + (hi - lo) * i / 4.0;
    const double y = y0 - (y0 - kTop) * i / 4.0;
    svg << "<line x1=\"" << Num(kLeft - 4) << "\" y1=\"" << Num(y) << "\" x2=\""
        << Num(kLeft) << "\" y2=\"" << Num(y) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << Num(kLeft - 6) << "\" y=\"" << Num(y + 4)
        << "\" text-anchor=\"end\">" << Tick(v) << "</text>\n";
  }
}

std::ofstream OpenOut(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void WriteFile(const fs::path& path, const std::string& body,
               std::vector<std::string>& written) {
  std::ofstream out = OpenOut(path);
  out << body;
  out.close();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
  written.push_back(path.string());
}

}  // namespace

void WriteTrialsCsv(const ExperimentReport& report, std::ostream& out) {
  if (report.config.mode == Mode::kOffline) {
    out << "trial,success,effort_ratio,objective,target_probability,"
           "required_probability,std_error,target_pulls,suboptimal\n";
    for (const OfflineTrialRow& r : report.offline) {
      out << r.trial << ',' << (r.success ? 1 : 0) << ','
          << FormatDouble(r.effort_ratio) << ',' << FormatDouble(r.objective)
          << ',' << FormatDouble(r.target_probability) << ','
          << FormatDouble(r.required_probability) << ','
          << FormatDouble(r.std_error) << ',' << r.target_pulls << ','
          << (r.suboptimal ? 1 : 0) << '\n';
    }
    return;
  }
  out << "gap,trial,target_fraction,total_cost,regret,concentration_held";
  for (int64_t cp : report.checkpoints) out << ",cost_" << cp;
  for (int64_t cp : report.checkpoints) out << ",target_pulls_" << cp;
  out << '\n';
  for (const OnlineTrialRow& r : report.online) {
    out << FormatDouble(r.gap) << ',' << r.trial << ','
        << FormatDouble(r.target_fraction) << ',' << FormatDouble(r.total_cost)
        << ',' << FormatDouble(r.regret) << ',' << (r.concentration_held ? 1 : 0);
    for (double c : r.cost_at) out << ',' << FormatDouble(c);
    for (int64_t n : r.target_pulls_at) out << ',' << n;
    out << '\n';
  }
}

void WriteSummaryCsv(const std::vector<SummaryRow>& rows, std::ostream& out) {
  out << "group,metric,checkpoint,value\n";
  for (const SummaryRow& r : rows) {
    out << r.group << ',' << r.metric << ',' << r.checkpoint << ','
        << FormatDouble(r.value) << '\n';
  }
}

Histogram MakeHistogram(const std::vector<double>& values, int bins) {
  Histogram h;
  if (values.empty()) return h;
  if (bins <= 0) {
    bins = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(values.size()))));
  }
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  h.lo = *lo_it;
  h.hi = *hi_it;
  if (h.hi <= h.lo) h.hi = h.lo + 1e-12;
  h.counts.assign(bins, 0);
  const double width = (h.hi - h.lo) / bins;
  for (double v : values) {
    int b = static_cast<int>((v - h.lo) / width);
    h.counts[std::clamp(b, 0, bins - 1)]++;
  }
  return h;
}

std::string HistogramSvg(const Histogram& histogram, const std::string& title,
                         const std::string& x_label) {
  std::ostringstream svg;
  Header(svg, title);
  Axes(svg, x_label, "trials");
  const int64_t peak =
      histogram.counts.empty()
          ? 1
          : std::max<int64_t>(1, *std::max_element(histogram.counts.begin(),
                                                   histogram.counts.end()));
  YTicks(svg, 0.0, static_cast<double>(peak));
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const double bar_w = plot_w / std::max<size_t>(1, histogram.counts.size());
  for (size_t b = 0; b < histogram.counts.size(); ++b) {
    const double h = plot_h * histogram.counts[b] / static_cast<double>(peak);
    svg << "<rect class=\"bar\" x=\"" << Num(kLeft + b * bar_w) << "\" y=\""
        << Num(kTop + plot_h - h) << "\" width=\"" << Num(bar_w)
        << "\" height=\"" << Num(h)
        << "\" fill=\"#4c72b0\" stroke=\"white\"/>\n";
  }
  const double y0 = kHeight - kBottom;
  for (int i = 0; i <= 4; ++i) {
    const double v = histogram.lo + (histogram.hi - histogram.lo) * i / 4.0;
    const double x = kLeft + plot_w * i / 4.0;
    svg << "<text x=\"" << Num(x) << "\" y=\"" << Num(y0 + 16)
        << "\" text-anchor=\"middle\">" << Tick(v) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string LineChartSvg(const std::vector<Series>& series,
                         const std::string& title, const std::string& x_label,
                         const std::string& y_label, bool log_x) {
  std::ostringstream svg;
  Header(svg, title);
  Axes(svg, x_label, y_label);
  auto tx = [log_x](double x) { return log_x ? std::log10(x) : x; };
  double x_lo = INFINITY, x_hi = -INFINITY, y_lo = 0.0, y_hi = -INFINITY;
  for (const Series& s : series) {
    for (size_t i = 0; i < s.x.size(); ++i) {
      x_lo = std::min(x_lo, tx(s.x[i]));
      x_hi = std::max(x_hi, tx(s.x[i]));
      y_lo = std::min(y_lo, s.y[i]);
      y_hi = std::max(y_hi, s.y[i]);
    }
  }
  if (!(x_hi > x_lo)) x_hi = x_lo + 1.0;
  if (!(y_hi > y_lo)) y_hi = y_lo + 1.0;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + plot_w * (tx(x) - x_lo) / (x_hi - x_lo); };
  auto py = [&](double y) { return kTop + plot_h * (1.0 - (y - y_lo) / (y_hi - y_lo)); };
  YTicks(svg, y_lo, y_hi);
  const double y0 = kHeight - kBottom;
  for (int i = 0; i <= 4; ++i) {
    const double v = x_lo + (x_hi - x_lo) * i / 4.0;
    svg << "<text x=\"" << Num(kLeft + plot_w * i / 4.0) << "\" y=\""
        << Num(y0 + 16) << "\" text-anchor=\"middle\">"
        << Tick(log_x ? std::pow(10.0, v) : v) << "</text>\n";
  }
  for (size_t k = 0; k < series.size(); ++k) {
    const Series& s = series[k];
    const char* color = kPalette[k % (sizeof(kPalette) / sizeof(kPalette[0]))];
    svg << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < s.x.size(); ++i) {
      if (i) svg << ' ';
      svg << Num(px(s.x[i])) << ',' << Num(py(s.y[i]));
    }
    svg << "\"/>\n";
    const double ly = kTop + 14.0 * (k + 1);
    svg << "<text x=\"" << Num(kLeft + 10) << "\" y=\"" << Num(ly)
        << "\" fill=\"" << color << "\">" << Escape(s.label) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::vector<std::string> EmitOutputs(const ExperimentReport& report,
                                     const std::string& directory) {
  const fs::path dir(directory);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create directory '" + dir.string() +
                  "': " + ec.message());
  }
  std::vector<std::string> written;
  WriteFile(dir / "config.json", ConfigToJson(report.config).dump(2) + "\n",
            written);
  {
    std::ostringstream body;
    WriteTrialsCsv(report, body);
    WriteFile(dir / "trials.csv", body.str(), written);
  }
  const std::vector<SummaryRow> summary = Summarize(report);
  {
    std::ostringstream body;
    WriteSummaryCsv(summary, body);
    WriteFile(dir / "summary.csv", body.str(), written);
  }

  if (report.config.mode == Mode::kOffline) {
    if (!report.offline.empty()) {
      std::vector<double> ratios;
      for (const OfflineTrialRow& r : report.offline) ratios.push_back(r.effort_ratio);
      const Histogram h = MakeHistogram(ratios, report.config.hist_bins);
      WriteFile(dir / "effort_ratio_hist.svg",
                HistogramSvg(h, "Effort ratio (" +
                                    AlgorithmName(report.config.algo) + ")",
                             "effort ratio"),
                written);
    }
    if (!report.artifacts.empty()) {
      const fs::path plans = dir / "plans";
      fs::create_directories(plans, ec);
      if (ec) {
        throw IoError("cannot create directory '" + plans.string() +
                      "': " + ec.message());
      }
      for (const OfflineArtifact& a : report.artifacts) {
        std::ostringstream plan, hist;
        WritePlanCsv(a.history.RewardVectors(), a.plan.poison, plan);
        WriteHistoryCsv(a.history, hist);
        WriteFile(plans / ("plan_" + std::to_string(a.trial) + ".csv"),
                  plan.str(), written);
        WriteFile(plans / ("history_" + std::to_string(a.trial) + ".csv"),
                  hist.str(), written);
      }
    }
    return written;
  }

  if (report.online.empty()) return written;
  std::vector<Series> cost, pulls;
  for (const SummaryRow& row : summary) {
    if (row.checkpoint == 0) continue;
    std::vector<Series>* target = nullptr;
    if (row.metric == "cost_mean") target = &cost;
    if (row.metric == "target_pulls_mean") target = &pulls;
    if (!target) continue;
    if (target->empty() || target->back().label != "gap " + row.group) {
      target->push_back({"gap " + row.group, {}, {}});
    }
    target->back().x.push_back(static_cast<double>(row.checkpoint));
    target->back().y.push_back(row.value);
  }
  const std::string attack = AttackKindName(report.config.attack);
  WriteFile(dir / "cost_vs_time.svg",
            LineChartSvg(cost, "Cumulative attack cost (" + attack + ")",
                         "round", "mean cost", true),
            written);
  WriteFile(dir / "target_pulls_vs_time.svg",
            LineChartSvg(pulls, "Target arm pulls (" + attack + ")", "round",
                         "mean pulls", true),
            written);
  return written;
}

}  // namespace poison
