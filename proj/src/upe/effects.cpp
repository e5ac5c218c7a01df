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

#include "upe/effects.hpp"

#include <cmath>
#include <span>
#include <string>

#include "upe/error.hpp"
#include "upe/quantile.hpp"

namespace upe {

void PolicySpec::validate(int n_targets) const {
  if (simultaneous()) {
    if (n_targets != 2 || ldot_vec.size() != 2) {
      fail(ErrKind::wrong_target_count,
           "simultaneous mode needs exactly two target covariates");
    }
    if (ldot_vec[0] == 0.0 && ldot_vec[1] == 0.0) {
      fail(ErrKind::invalid_config, "all shift derivatives are zero");
    }
  } else {
    if (n_targets != 1) {
      fail(ErrKind::wrong_target_count,
           "location-scale mode needs exactly one target covariate");
    }
    if (ldot0 == 0.0 && sdot0 == 0.0) {
      fail(ErrKind::invalid_config, "both ldot0 and sdot0 are zero");
    }
  }
}

TauFit fit_tau(const Vec& y, const Design& design, double tau, LinkKind link,
               const KernelSpec* kernel, const FitOptions& opts) {
  const Eigen::Index n = y.size();
  if (n != design.Z.rows()) {
    fail(ErrKind::dimension_mismatch, "outcome and design row counts differ");
  }
  TauFit fit;
  fit.tau = tau;
  const std::span<const double> ys(y.data(), static_cast<std::size_t>(n));
  fit.q_hat = sample_quantile(ys, tau);

  fit.indicator.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) fit.indicator[i] = y[i] <= fit.q_hat;

  fit.model = fit_binary_link(fit.indicator, design.Z, link, opts,
                              design.intercept_col, fit.q_hat);

  KernelSpec kern = kernel ? *kernel : KernelSpec{};
  if (!kernel) kern.bandwidth = silverman_bandwidth(ys);
  kern.validate();
  fit.bandwidth = kern.bandwidth;
  fit.f_hat = kde_at(ys, fit.q_hat, kern);
  if (fit.f_hat < kDensityFloor) {
    fail(ErrKind::density_near_zero,
         "estimated outcome density at the quantile is below 1e-12");
  }
  return fit;
}

EffectEstimate location_scale_effects(const TauFit& fit, const Design& design,
                                      const Vec& x, const PolicySpec& policy,
                                      bool log_outcome) {
  policy.validate(design.n_targets);
  EffectEstimate out;
  out.tau = fit.tau;
  out.q_hat = fit.q_hat;
  out.f_hat = fit.f_hat;
  out.bandwidth = fit.bandwidth;

  const Vec d = fit.model.pdf.cwiseProduct(
      design.xdot_dot_alpha(0, fit.model.theta));
  const double s1 = d.mean();
  const double s2 = d.cwiseProduct((x.array() - policy.mu).matrix()).mean();
  out.pi_l = -policy.ldot0 * s1 / fit.f_hat;
  out.pi_s = -policy.sdot0 * s2 / fit.f_hat;
  out.pi_total = out.pi_l + out.pi_s;

  if (policy.sdot0 != 0.0) {
    if (log_outcome) {
      out.elasticity = out.pi_s / policy.sdot0;
    } else if (fit.q_hat != 0.0) {
      out.elasticity = elasticity(out.pi_s, policy.sdot0, fit.q_hat);
    }
  }
  return out;
}

EffectEstimate simultaneous_effects(const TauFit& fit, const Design& design,
                                    const PolicySpec& policy) {
  policy.validate(design.n_targets);
  EffectEstimate out;
  out.tau = fit.tau;
  out.q_hat = fit.q_hat;
  out.f_hat = fit.f_hat;
  out.bandwidth = fit.bandwidth;
  out.pi_component.resize(2);
  for (int j = 0; j < 2; ++j) {
    const Vec dj = fit.model.pdf.cwiseProduct(
        design.xdot_dot_alpha(j, fit.model.theta));
    out.pi_component[j] = -policy.ldot_vec[j] * dj.mean() / fit.f_hat;
  }
  out.pi_c = out.pi_component[0] + out.pi_component[1];
  return out;
}

double elasticity(double pi_s, double sdot0, double q_tau_y) {
  if (sdot0 == 0.0 || q_tau_y == 0.0) {
    fail(ErrKind::zero_denominator, "elasticity needs sdot0 != 0 and Q != 0");
  }
  return pi_s / (sdot0 * q_tau_y);
}

TauAnalysis estimate_location_scale(const Vec& y, const Mat& x, const Mat& w,
                                    const PolicySpec& policy, double tau,
                                    LinkKind link, const BasisSpec& basis,
                                    const KernelSpec* kernel, bool log_outcome,
                                    const FitOptions& opts) {
  const Design design = build_design(x, w, basis);
  policy.validate(design.n_targets);
  TauAnalysis a{fit_tau(y, design, tau, link, kernel, opts), {}};
  a.effect = location_scale_effects(a.fit, design, x.col(0), policy, log_outcome);
  return a;
}

TauAnalysis estimate_simultaneous(const Vec& y, const Mat& x, const Mat& w,
                                  const PolicySpec& policy, double tau,
                                  LinkKind link, const BasisSpec& basis,
                                  const KernelSpec* kernel,
                                  const FitOptions& opts) {
  const Design design = build_design(x, w, basis);
  policy.validate(design.n_targets);
  TauAnalysis a{fit_tau(y, design, tau, link, kernel, opts), {}};
  a.effect = simultaneous_effects(a.fit, design, policy);
  return a;
}

}  // namespace upe
