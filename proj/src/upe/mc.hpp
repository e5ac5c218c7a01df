// Copyright 2026 The upe authors
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

#include <cstdint>
#include <string>
#include <vector>

#include "upe/inference.hpp"
#include "upe/oracle.hpp"

namespace upe {

enum class McMode { bias, coverage, power, normality };

const char* mc_mode_name(McMode mode);

struct McConfig {
  NormalLinearDgp dgp;
  int n = 1000;
  int reps = 2000;
  std::vector<double> taus{0.10, 0.25, 0.50, 0.75, 0.90};
  std::vector<LinkKind> links{LinkKind::probit, LinkKind::logit};
  PolicySpec policy;               // pivot must sit at dgp.mu_x
  std::uint64_t seed = 1;
  std::vector<double> gamma_grid;  // coverage and power modes
  int workers = 0;                 // 0: hardware concurrency
  double conf_level = 0.95;
  InferenceOptions inference;

  void validate(McMode mode) const;
};

// Long-format cell: one (estimator, link, tau, n, gamma, statistic) entry.
struct McCell {
  std::string estimator;  // location | scale | scale_ttest | estimation
  std::string link;
  double tau = 0.0;
  int n = 0;
  double gamma = 0.0;
  std::string statistic;  // bias | variance | mse | coverage | reject_raw |
                          // reject_size_adj | ks_stat | ks_pvalue |
                          // failure_rate
  double value = 0.0;
  double mc_se = 0.0;
};

struct PowerSeries {
  std::string link;
  double tau = 0.0;
  std::vector<double> gamma, reject_raw, reject_adj, mc_se_raw, mc_se_adj;
};

struct QqSeries {
  std::string estimator;
  std::string link;
  double tau = 0.0;
  double gamma = 0.0;
  std::vector<double> theoretical, empirical;
};

struct McSummary {
  McMode mode = McMode::bias;
  int n = 0;
  int reps = 0;
  std::uint64_t seed = 0;
  std::vector<McCell> cells;
  std::vector<PowerSeries> power_series;
  std::vector<QqSeries> qq_series;
};

McSummary run_bias_table(const McConfig& config);
McSummary run_coverage_table(const McConfig& config);
McSummary run_power_curve(const McConfig& config);
McSummary run_normality_diag(const McConfig& config);
McSummary run_mc(McMode mode, const McConfig& config);

// Writes <mode>_table.csv plus the mode's plot-ready series files into `dir`.
// Output bytes depend only on the summary contents.
void write_mc_outputs(const McSummary& summary, const std::string& dir);

// Kolmogorov-Smirnov distance against N(0,1) and its asymptotic p-value.
std::pair<double, double> ks_normal_test(std::vector<double> draws);

}  // namespace upe
