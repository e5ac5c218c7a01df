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
#include <utility>
#include <vector>

#include "upe/design.hpp"
#include "upe/effects.hpp"

namespace upe {

// Y = lambda + gamma X + U with X ~ N(mu_x, sigma_x^2), U ~ N(0, sigma_u^2)
// independent. The model with closed-form location and scale effects.
struct NormalLinearDgp {
  double lambda = 0.0;
  double gamma = 1.0;
  double mu_x = 0.0;
  double sigma_x = 1.0;
  double sigma_u = 1.0;

  double r_squared() const;
  double q_tau_y(double tau) const;  // lambda + mu_x gamma + Q_tau[U + (X-mu_x)gamma]
  void validate() const;
};

struct ClosedFormEffects {
  double pi_l = 0.0;
  double pi_s = 0.0;
  std::optional<double> elasticity;
  double q_tau_y = 0.0;
};

// pi_L = ldot(0) gamma; pi_S = sdot(0) sqrt(R^2) sigma_x |gamma| z_tau.
// Derived at the pivot mu = mu_x; any other pivot raises PivotMismatch.
ClosedFormEffects closed_form_effects(const NormalLinearDgp& dgp,
                                      const PolicySpec& policy, double tau);

struct BruteForceResult {
  double pi_l = 0.0;
  double pi_s = 0.0;
};

// Central finite differences [Q_tau(Y_{+d}) - Q_tau(Y_{-d})]/(2d) on common
// simulated draws, pure-location and pure-scale channels separately.
BruteForceResult brute_force_effect(const NormalLinearDgp& dgp,
                                    const PolicySpec& policy, double tau,
                                    double delta, std::int64_t n_sim,
                                    std::uint64_t seed, int workers = 0);

// One simulation pass evaluated on a whole tau grid.
std::vector<BruteForceResult> brute_force_effect_grid(
    const NormalLinearDgp& dgp, const PolicySpec& policy,
    const std::vector<double>& taus, double delta, std::int64_t n_sim,
    std::uint64_t seed, int workers = 0);

struct OracleComparisonRow {
  double tau = 0.0;
  const char* channel = "";  // "location" | "scale"
  double closed_form = 0.0;
  double brute_force = 0.0;  // mean over replicate seeds
  double mc_se = 0.0;
  double tolerance = 0.0;    // max(3 mc_se, 5e-3)
  bool pass = false;
};

// Replicated brute-force runs against the closed form, one row per
// (tau, channel).
std::vector<OracleComparisonRow> oracle_compare(
    const NormalLinearDgp& dgp, const PolicySpec& policy,
    const std::vector<double>& taus, double delta, std::int64_t n_sim,
    int replicates, std::uint64_t seed, int workers = 0);

void write_oracle_csv(const std::vector<OracleComparisonRow>& rows,
                      const std::string& path);

// Nodes and weights for int e^{-t^2} f(t) dt (Golub-Welsch).
std::pair<Vec, Vec> gauss_hermite(int n);

// Residual of E[m(X)(X - mu_x)] = sigma_x^2 E[m'(X)] for
// m(x) = dS_{Y|X}(Q_tau[Y]|x)/dx, evaluated by quadrature.
double stein_check(const NormalLinearDgp& dgp, double tau, int n_quad);

}  // namespace upe
