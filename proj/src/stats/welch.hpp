// Copyright 2026 The driveadapt Authors
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

#pragma once

#include <span>
#include <string>
#include <utility>

#include "features/feature_csv.hpp"

namespace driveadapt::stats {

struct TTestResult {
  double t = 0.0;
  double dof = 0.0;
  double p = 1.0;  // two-sided
};

// Regularized incomplete beta I_x(a, b).
double incomplete_beta(double a, double b, double x);

// Two-sided tail probability of Student's t with `dof` degrees of freedom.
double student_t_two_sided(double t, double dof);

// Unequal-variance two-sample t-test. Throws domain_error when either sample
// has fewer than two values or both are constant.
TTestResult welch_ttest(std::span<const double> a, std::span<const double> b);

struct Contrast {
  TTestResult aggressive_vs_same;
  TTestResult defensive_vs_same;
};

// Throws invalid_argument for an unknown feature and domain_error when a
// preference class is absent or a comparison is degenerate.
Contrast preference_contrast(const features::FeatureTable& table,
                             const std::string& feature);

}  // namespace driveadapt::stats
