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

#ifndef FAKENIGHT_CORE_REPORT_HPP
#define FAKENIGHT_CORE_REPORT_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "core/experiment.hpp"

namespace fakenight {

struct ChartBar {
  std::string label;
  double mean = 0.0;
  double stddev = 0.0;
};

/// Horizontal bar chart on a [0,1] axis with +/- std whiskers.
std::string render_bar_chart_svg(const std::string &title, const std::vector<ChartBar> &bars);

/// One SVG per test composition (bars in result order) plus summary.json and
/// summary.csv. Returns the written paths.
std::vector<std::filesystem::path> render_report(const std::vector<ExperimentResult> &results,
                                                 const std::filesystem::path &out_dir);

}  // namespace fakenight

#endif  // FAKENIGHT_CORE_REPORT_HPP
