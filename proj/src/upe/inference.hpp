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

#include "upe/effects.hpp"

namespace upe {

struct InferenceOptions {
  // hessian_avg() returns the positive-definite information matrix while the
  // average log-likelihood Hessian it stands in for is negative definite.
  // With `flip_ml_correction` the maximum-likelihood correction terms
  // (M Hinv s_i and M Hinv H_Q psi_i) enter the influence rows with the sign
  // implied by that negative-definite Hessian; without it they enter with
  // the naive plug-in sign. The default was fixed by a simulation
  // calibration: only the flipped sign reproduces the Monte Carlo variance
  // of the effect estimators (see tests/unit/inference_test.cpp).
  bool flip_ml_correction = true;
  // Use 1{y < q} instead of 1{y <= q} inside psi. Measure-zero difference
  // for continuous outcomes; kept as a switch for replication studies.
  bool psi_strict = false;
};

// Building blocks shared by the influence rows and the scale t-test; all of
// them are invariant to the policy parameters (mu, ldot, sdot).
struct InferenceBlocks {
  Mat a_rows;   // n x 2: g (phidot'alpha) Xtil'  (per-target columns in the
                // simultaneous mode)
  Vec a_mean;   // column means of a_rows
  Mat ms_rows;  // n x 2: rows of (M Hinv s_i)'
  Vec m_hq;     // 2: M Hinv H_Q
  Vec psi_rows; // n: (tau - 1{y<=q}) / f_hat
  Vec kh;       // n: K_h(y_i - q_hat)
  double f_hat = 0.0;
  double fdot_hat = 0.0;
  Mat M_hat;    // 2 x d_z
  Mat H_hat;    // d_z x d_z information form
  Vec HQ_hat;   // d_z
  double tau = 0.0;
  bool flipped = true;
};

InferenceBlocks build_inference_blocks(const Vec& y, const Vec& x,
                                       const Design& design, const TauFit& fit,
                                       const InferenceOptions& opts = {});

// Simultaneous-shift analogue: a_rows holds the per-target g (phidot_j'alpha_j)
// and M is built from the block-diagonal basis derivative.
InferenceBlocks build_inference_blocks_simultaneous(
    const Vec& y, const Design& design, const TauFit& fit,
    const InferenceOptions& opts = {});

struct InfluenceComponents {
  Mat phi_rows;        // n x 2
  Eigen::Matrix2d D;   // D_mu (location-scale) or D_L (simultaneous)
  Vec pi;              // the effect pair the rows expand around
  InferenceBlocks blocks;
};

// Plug-in influence rows for (pi_L, pi_S) of a location-scale policy.
InfluenceComponents influence_rows(const Vec& y, const Vec& x,
                                   const Design& design, const TauFit& fit,
                                   const EffectEstimate& effect,
                                   const PolicySpec& policy,
                                   const InferenceOptions& opts = {});

// Influence rows for the per-target pair (pi_L1, pi_L2) of a simultaneous
// shift; pi_c = (1,1)' pair.
InfluenceComponents influence_rows_simultaneous(const Vec& y,
                                                const Design& design,
                                                const TauFit& fit,
                                                const EffectEstimate& effect,
                                                const PolicySpec& policy,
                                                const InferenceOptions& opts = {});

// Recombine prebuilt blocks for a new D / pi pair (exact in the blocks).
Mat combine_influence_rows(const InferenceBlocks& blocks,
                           const Eigen::Matrix2d& D, const Vec& pi);

struct EffectCI {
  double se = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

// se = sqrt(n^-2 sum (l' phi_i)^2), CI = point +/- z_(1+level)/2 * se.
EffectCI effect_ci(const InfluenceComponents& comp, const Vec& l, double point,
                   double level);

struct ScaleTestResult {
  double gamma_hat = 0.0;
  double v_hat = 0.0;
  double t_stat = 0.0;
  double p_value = 1.0;
};

// t-test of a zero scale effect via its numerator Gamma (sdot(0) normalized
// to one): t = sqrt(n) Gamma / sqrt(V), two-sided normal p-value.
ScaleTestResult scale_effect_ttest(const InferenceBlocks& blocks, double mu);

}  // namespace upe
