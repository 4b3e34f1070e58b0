// Copyright 2026 The fakenight Authors
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

#include "core/report.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include <fmt/format.h>

#include "core/dataset_io.hpp"
#include "core/error.hpp"

namespace fakenight {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kLabelWidth = 220;
constexpr int kPlotWidth = 460;
constexpr int kRightMargin = 40;
constexpr int kTop = 50;
constexpr int kRowHeight = 44;
constexpr int kBarHeight = 24;
constexpr int kAxisSpace = 40;

std::string xml_escape(const std::string &s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

double px(double v) { return kLabelWidth + std::clamp(v, 0.0, 1.0) * kPlotWidth; }

std::string safe_file_name(const std::string &s) {
  std::string out;
  for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
  return out;
}

}  // namespace

std::string render_bar_chart_svg(const std::string &title, const std::vector<ChartBar> &bars) {
  const int width = kLabelWidth + kPlotWidth + kRightMargin;
  const int plot_bottom = kTop + static_cast<int>(bars.size()) * kRowHeight;
  const int height = plot_bottom + kAxisSpace;

  std::string svg;
  svg += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\" "
      "font-family=\"sans-serif\" font-size=\"12\">\n",
      width, height, width, height);
  svg += fmt::format("<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"#ffffff\"/>\n", width, height);
  svg += fmt::format("<text x=\"{}\" y=\"24\" font-size=\"15\" text-anchor=\"middle\">{}</text>\n", width / 2,
                     xml_escape(title));

  for (int i = 0; i <= 10; ++i) {
    const double v = i / 10.0;
    svg += fmt::format("<line x1=\"{:.2f}\" y1=\"{}\" x2=\"{:.2f}\" y2=\"{}\" stroke=\"#dddddd\"/>\n", px(v), kTop - 6,
                       px(v), plot_bottom);
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{}\" text-anchor=\"middle\">{:.1f}</text>\n", px(v), plot_bottom + 16, v);
  }
  svg += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#000000\"/>\n", kLabelWidth, kTop - 6,
                     kLabelWidth, plot_bottom);
  svg += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#000000\"/>\n", kLabelWidth, plot_bottom,
                     kLabelWidth + kPlotWidth, plot_bottom);
  svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">mAP</text>\n", kLabelWidth + kPlotWidth / 2,
                     plot_bottom + 32);

  for (size_t i = 0; i < bars.size(); ++i) {
    const auto &b = bars[i];
    const int row_y = kTop + static_cast<int>(i) * kRowHeight;
    const int bar_y = row_y + (kRowHeight - kBarHeight) / 2;
    const int mid_y = bar_y + kBarHeight / 2;
    svg += "<g class=\"bar\">\n";
    svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\" dominant-baseline=\"middle\">{}</text>\n",
                       kLabelWidth - 8, mid_y, xml_escape(b.label));
    svg += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{:.2f}\" height=\"{}\" fill=\"#4c72b0\"/>\n", kLabelWidth,
                       bar_y, px(b.mean) - kLabelWidth, kBarHeight);
    const double lo = px(b.mean - b.stddev);
    const double hi = px(b.mean + b.stddev);
    svg += fmt::format("<line x1=\"{:.2f}\" y1=\"{}\" x2=\"{:.2f}\" y2=\"{}\" stroke=\"#000000\"/>\n", lo, mid_y, hi,
                       mid_y);
    svg += fmt::format("<line x1=\"{:.2f}\" y1=\"{}\" x2=\"{:.2f}\" y2=\"{}\" stroke=\"#000000\"/>\n", lo, mid_y - 5,
                       lo, mid_y + 5);
    svg += fmt::format("<line x1=\"{:.2f}\" y1=\"{}\" x2=\"{:.2f}\" y2=\"{}\" stroke=\"#000000\"/>\n", hi, mid_y - 5,
                       hi, mid_y + 5);
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{}\" dominant-baseline=\"middle\">{:.3f} ± {:.3f}</text>\n",
                       std::min(hi, px(1.0)) + 6, mid_y, b.mean, b.stddev);
    svg += "</g>\n";
  }
  svg += "</svg>\n";
  return svg;
}

std::vector<fs::path> render_report(const std::vector<ExperimentResult> &results, const fs::path &out_dir) {
  if (results.empty()) throw Error(ErrorCode::kInvalidArgument, "report needs at least one experiment result");
  fs::create_directories(out_dir);

  std::vector<std::string> tests;
  for (const auto &r : results) {
    if (std::find(tests.begin(), tests.end(), r.test) == tests.end()) tests.push_back(r.test);
  }

  std::vector<fs::path> written;
  json summary = json::array();
  std::string csv = "test,training,completed_seeds,mean_map,std_map,against,t,df,p\n";
  for (const auto &test : tests) {
    std::vector<ChartBar> bars;
    for (const auto &r : results) {
      if (r.test != test) continue;
      const auto &s = r.statistics;
      ChartBar bar{r.training, 0.0, 0.0};
      if (s.summary) {
        bar.mean = s.summary->mean;
        bar.stddev = s.summary->stddev;
      } else if (!s.maps.empty()) {
        bar.mean = s.maps.front();
      }
      bars.push_back(bar);

      json comps = json::array();
      for (const auto &c : s.comparisons) {
        comps.push_back({{"against", c.against}, {"t", std::isfinite(c.test.t) ? json(c.test.t) : json(nullptr)},
                         {"df", c.test.df}, {"p", c.test.p}, {"degenerate_variance", c.test.degenerate_variance}});
        csv += fmt::format("{},{},{},{:.6f},{:.6f},{},{:.6f},{:.1f},{:.6g}\n", test, r.training, s.maps.size(),
                           bar.mean, bar.stddev, c.against, c.test.t, c.test.df, c.test.p);
      }
      if (s.comparisons.empty()) {
        csv += fmt::format("{},{},{},{:.6f},{:.6f},,,,\n", test, r.training, s.maps.size(), bar.mean, bar.stddev);
      }
      summary.push_back({{"test", test},
                         {"training", r.training},
                         {"completed_seeds", s.seeds},
                         {"maps", s.maps},
                         {"mean", bar.mean},
                         {"std", bar.stddev},
                         {"comparisons", comps},
                         {"warnings", s.warnings}});
    }
    const fs::path svg_path = out_dir / (safe_file_name(test) + ".svg");
    write_text_file(svg_path, render_bar_chart_svg("Results on " + test, bars));
    written.push_back(svg_path);
  }
  write_text_file(out_dir / "summary.json", json{{"results", summary}}.dump(1) + "\n");
  write_text_file(out_dir / "summary.csv", csv);
  written.push_back(out_dir / "summary.json");
  written.push_back(out_dir / "summary.csv");
  return written;
}

}  // namespace fakenight
