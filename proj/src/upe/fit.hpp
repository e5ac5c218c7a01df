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
#include <vector>

#include "upe/design.hpp"
#include "upe/links.hpp"

namespace upe {

struct FitOptions {
  double tol = 1e-8;       // max-abs mean gradient at convergence
  int max_iter = 100;
  int max_halvings = 30;
  double theta_cap = 1e4;  // infinity-norm bound before separation is declared
};

// Maximum-likelihood fit of P(indicator=1 | Z) = G(Z' theta).
struct FittedCdfModel {
  LinkKind link = LinkKind::probit;
  Vec theta;
  double q_hat = 0.0;  // quantile the indicator was formed at
  bool converged = false;
  int iterations = 0;
  double gradient_norm = 0.0;

  // Per-observation link values at theta, cached for downstream use.
  Vec eta;   // Z theta
  Vec cdf;   // G, clipped to [kProbClip, 1-kProbClip]
  Vec pdf;   // g
  Vec pdf_deriv;  // gdot
};

// Newton-Raphson with step halving on the Bernoulli log-likelihood.
// `intercept_col` seeds theta at G^{-1}(mean indicator); pass -1 to start
// from zeros.
FittedCdfModel fit_binary_link(const std::vector<std::uint8_t>& indicator,
                               const Mat& Z, LinkKind link,
                               const FitOptions& opts = {},
                               int intercept_col = -1, double q_hat = 0.0);

// Score rows s_i = g Z_i (1{Y_i<=q} - G) / (G(1-G)), n x d_z.
Mat score_rows(const FittedCdfModel& model,
               const std::vector<std::uint8_t>& indicator, const Mat& Z);

// (1/n) sum g^2 / (G(1-G)) Z_i Z_i'. Positive semi-definite information
// form; the average log-likelihood Hessian it estimates is its negative.
Mat hessian_avg(const FittedCdfModel& model, const Mat& Z);

// Rows Lambda_i = g Z_i / (G(1-G)); equal to Z_i exactly under the logit.
Mat lambda_weights(const FittedCdfModel& model, const Mat& Z);

}  // namespace upe
