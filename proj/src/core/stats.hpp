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

#ifndef FAKENIGHT_CORE_STATS_HPP
#define FAKENIGHT_CORE_STATS_HPP

#include <span>

namespace fakenight {

struct RunSummary {
  double mean = 0.0;
  double stddev = 0.0;  // sample (n - 1)
};

RunSummary summarize_runs(std::span<const double> values);

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double regularized_incomplete_beta(double a, double b, double x);

/// Two-sided tail P(|T| >= |t|) of Student's t with `df` degrees of freedom.
double student_t_two_tailed_p(double t, double df);

enum class TTestVariant { kPooled, kWelch };

struct TTestResult {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;
  bool degenerate_variance = false;
};

/// Unpaired two-sample t-test; pooled variance by default.
TTestResult students_t_test(std::span<const double> a, std::span<const double> b,
                            TTestVariant variant = TTestVariant::kPooled);

}  // namespace fakenight

#endif  // FAKENIGHT_CORE_STATS_HPP
