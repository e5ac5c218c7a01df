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

#include <optional>
#include <string>
#include <vector>

#include "upe/dataset.hpp"
#include "upe/inference.hpp"

namespace upe {

struct RunConfig {
  std::vector<double> taus{0.10, 0.25, 0.50, 0.75, 0.90};
  std::vector<LinkKind> links{LinkKind::probit};
  XBasis x_basis = XBasis::linear;
  PolicySpec policy;
  std::optional<double> bandwidth;  // empty: Silverman rule
  bool log_outcome = false;
  double conf_level = 0.95;
  InferenceOptions inference;

  void validate() const;
};

struct EffectRow {
  double tau = 0.0;
  std::string link;
  std::string effect;  // location | scale | total | location_1 | location_2 |
                       // compensated
  double estimate = 0.0;
  double se = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  std::optional<double> elasticity;
  double mu = 0.0;     // pivot, printed alongside every row
  double q_hat = 0.0;
  double f_hat = 0.0;
};

struct ScaleTestRow {
  double tau = 0.0;
  std::string link;
  double gamma_hat = 0.0;
  double v_hat = 0.0;
  double t_stat = 0.0;
  double p_value = 1.0;
};

// Versioned output schema; golden-file tests pin the headers.
inline constexpr int kReportSchemaVersion = 1;
inline constexpr const char* kEffectsCsvHeader =
    "tau,link,effect,estimate,se,ci_lo,ci_hi,elasticity,mu,q_hat,f_hat";
inline constexpr const char* kScaleTestCsvHeader =
    "tau,link,gamma_hat,v_hat,t_stat,p_value";

struct EffectReport {
  int schema_version = kReportSchemaVersion;
  int n = 0;
  bool simultaneous = false;
  bool log_outcome = false;
  double conf_level = 0.95;
  double bandwidth = 0.0;
  PolicySpec policy;
  std::vector<EffectRow> rows;
  std::vector<ScaleTestRow> scale_tests;
};

// Full per-tau, per-link pipeline over a dataset (requires n >= 30).
EffectReport run_estimate(const Dataset& data, const RunConfig& config);

void write_report_csv(const EffectReport& report, const std::string& path);
void write_scale_test_csv(const EffectReport& report, const std::string& path);
void write_report_json(const EffectReport& report, const std::string& path);
EffectReport read_report_json(const std::string& path);

}  // namespace upe
