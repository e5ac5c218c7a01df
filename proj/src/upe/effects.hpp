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
#include <optional>
#include <vector>

#include "upe/design.hpp"
#include "upe/fit.hpp"
#include "upe/kde.hpp"

namespace upe {

// Intervention X_d = (X - mu) s(d) + mu + l(d) with s(0)=1, l(0)=0; only the
// derivatives at d=0 enter any estimator. `ldot_vec` switches to the
// simultaneous mode: joint location shifts of two target covariates.
struct PolicySpec {
  double ldot0 = 0.0;
  double sdot0 = 0.0;
  double mu = 0.0;
  std::vector<double> ldot_vec;

  bool simultaneous() const { return !ldot_vec.empty(); }
  void validate(int n_targets) const;
};

struct EffectEstimate {
  double tau = 0.0;
  double q_hat = 0.0;
  double f_hat = 0.0;
  double bandwidth = 0.0;
  double pi_l = 0.0;
  double pi_s = 0.0;
  double pi_total = 0.0;
  double pi_c = 0.0;
  std::vector<double> pi_component;  // simultaneous mode, one per target
  std::optional<double> elasticity;
};

// Per-(tau, link) state shared by the effect and inference computations.
// Everything downstream reuses this single fitted model.
struct TauFit {
  double tau = 0.0;
  double q_hat = 0.0;
  double f_hat = 0.0;
  double bandwidth = 0.0;
  std::vector<std::uint8_t> indicator;  // 1{y_i <= q_hat}
  FittedCdfModel model;
};

inline constexpr double kDensityFloor = 1e-12;

// quantile -> indicator -> fit -> density. `kernel` null selects the
// Silverman-rule bandwidth.
TauFit fit_tau(const Vec& y, const Design& design, double tau, LinkKind link,
               const KernelSpec* kernel = nullptr, const FitOptions& opts = {});

// Location and scale effects on one fitted model. The leading minus signs
// come from dS/dx = -dF/dx for the conditional survival function.
EffectEstimate location_scale_effects(const TauFit& fit, const Design& design,
                                      const Vec& x, const PolicySpec& policy,
                                      bool log_outcome = false);

// Compensated effect of simultaneous location shifts of two targets:
// pi_c = sum_j of per-target location effects.
EffectEstimate simultaneous_effects(const TauFit& fit, const Design& design,
                                    const PolicySpec& policy);

// Quantile-standard-deviation elasticity Pi_S / (sdot(0) Q_tau[Y]).
double elasticity(double pi_s, double sdot0, double q_tau_y);

// One-shot convenience wrappers.
struct TauAnalysis {
  TauFit fit;
  EffectEstimate effect;
};

TauAnalysis estimate_location_scale(const Vec& y, const Mat& x, const Mat& w,
                                    const PolicySpec& policy, double tau,
                                    LinkKind link, const BasisSpec& basis,
                                    const KernelSpec* kernel = nullptr,
                                    bool log_outcome = false,
                                    const FitOptions& opts = {});

TauAnalysis estimate_simultaneous(const Vec& y, const Mat& x, const Mat& w,
                                  const PolicySpec& policy, double tau,
                                  LinkKind link, const BasisSpec& basis,
                                  const KernelSpec* kernel = nullptr,
                                  const FitOptions& opts = {});

}  // namespace upe
