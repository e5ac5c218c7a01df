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

#include "upe/inference.hpp"

#include <cmath>

#include "upe/error.hpp"
#include "upe/quantile.hpp"

namespace upe {

namespace {

// d x 2 solve Hinv M' with a singularity check on the information matrix.
Mat solve_hinv_mt(const Mat& H, const Mat& M) {
  Eigen::SelfAdjointEigenSolver<Mat> es(H);
  if (es.info() != Eigen::Success) {
    fail(ErrKind::singular_hessian, "eigen decomposition of H failed");
  }
  const Vec& ev = es.eigenvalues();
  const double emax = ev.cwiseAbs().maxCoeff();
  if (!(emax > 0.0) || ev.minCoeff() <= 1e-12 * emax) {
    fail(ErrKind::singular_hessian, "information matrix numerically singular");
  }
  return es.eigenvectors() *
         (es.eigenvalues().cwiseInverse().asDiagonal() *
          (es.eigenvectors().transpose() * M.transpose()));
}

Vec make_psi(const Vec& y, const TauFit& fit, bool strict) {
  const Eigen::Index n = y.size();
  Vec psi(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const bool below = strict ? (y[i] < fit.q_hat) : (y[i] <= fit.q_hat);
    psi[i] = (fit.tau - (below ? 1.0 : 0.0)) / fit.f_hat;
  }
  return psi;
}

Vec make_kh(const Vec& y, const TauFit& fit) {
  const Eigen::Index n = y.size();
  const double h = fit.bandwidth;
  Vec kh(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    kh[i] = normal_pdf((y[i] - fit.q_hat) / h) / h;
  }
  return kh;
}

InferenceBlocks finish_blocks(const Vec& y, const Design& design,
                              const TauFit& fit, const InferenceOptions& opts,
                              Mat a_rows, Mat M_hat) {
  InferenceBlocks b;
  b.tau = fit.tau;
  b.flipped = opts.flip_ml_correction;
  b.f_hat = fit.f_hat;
  b.a_rows = std::move(a_rows);
  b.a_mean = b.a_rows.colwise().mean().transpose();
  b.M_hat = std::move(M_hat);
  b.H_hat = hessian_avg(fit.model, design.Z);

  const Mat lambda = lambda_weights(fit.model, design.Z);
  b.kh = make_kh(y, fit);
  b.HQ_hat = lambda.transpose() * b.kh / static_cast<double>(y.size());

  const Mat hinv_mt = solve_hinv_mt(b.H_hat, b.M_hat);  // d x 2
  const Mat srows = score_rows(fit.model, fit.indicator, design.Z);
  b.ms_rows = srows * hinv_mt;           // n x 2
  b.m_hq = hinv_mt.transpose() * b.HQ_hat;  // 2

  b.psi_rows = make_psi(y, fit, opts.psi_strict);
  const std::span<const double> ys(y.data(), static_cast<std::size_t>(y.size()));
  KernelSpec kern;
  kern.bandwidth = fit.bandwidth;
  b.fdot_hat = kde_derivative_at(ys, fit.q_hat, kern);
  return b;
}

}  // namespace

InferenceBlocks build_inference_blocks(const Vec& y, const Vec& x,
                                       const Design& design, const TauFit& fit,
                                       const InferenceOptions& opts) {
  const Eigen::Index n = y.size();
  const Vec d = fit.model.pdf.cwiseProduct(
      design.xdot_dot_alpha(0, fit.model.theta));
  Mat a_rows(n, 2);
  a_rows.col(0) = d;
  a_rows.col(1) = d.cwiseProduct(x);

  // M1 = mean of gdot (phidot'alpha) Xtil Z'; M2 = mean of g Xtil phidot',
  // zero-padded into alpha's block.
  const Vec e = fit.model.pdf_deriv.cwiseProduct(
      design.xdot_dot_alpha(0, fit.model.theta));
  Mat M1(2, design.d_z);
  M1.row(0) = e.transpose() * design.Z / static_cast<double>(n);
  M1.row(1) = e.cwiseProduct(x).transpose() * design.Z / static_cast<double>(n);
  Mat M = M1;
  const Mat& xd = design.xdot[0];
  M.block(0, design.x_offset[0], 1, design.x_dim[0]) +=
      fit.model.pdf.transpose() * xd / static_cast<double>(n);
  M.block(1, design.x_offset[0], 1, design.x_dim[0]) +=
      fit.model.pdf.cwiseProduct(x).transpose() * xd / static_cast<double>(n);

  return finish_blocks(y, design, fit, opts, std::move(a_rows), std::move(M));
}

InferenceBlocks build_inference_blocks_simultaneous(
    const Vec& y, const Design& design, const TauFit& fit,
    const InferenceOptions& opts) {
  const Eigen::Index n = y.size();
  Mat a_rows(n, 2);
  for (int j = 0; j < 2; ++j) {
    a_rows.col(j) = fit.model.pdf.cwiseProduct(
        design.xdot_dot_alpha(j, fit.model.theta));
  }

  Mat M(2, design.d_z);
  for (int j = 0; j < 2; ++j) {
    const Vec ej = fit.model.pdf_deriv.cwiseProduct(
        design.xdot_dot_alpha(j, fit.model.theta));
    M.row(j) = ej.transpose() * design.Z / static_cast<double>(n);
    M.block(j, design.x_offset[j], 1, design.x_dim[j]) +=
        fit.model.pdf.transpose() * design.xdot[j] / static_cast<double>(n);
  }

  return finish_blocks(y, design, fit, opts, std::move(a_rows), std::move(M));
}

Mat combine_influence_rows(const InferenceBlocks& b, const Eigen::Matrix2d& D,
                           const Vec& pi) {
  const double sgn = b.flipped ? -1.0 : 1.0;
  const double inv_f = 1.0 / b.f_hat;
  const double kbar = b.kh.mean();

  const Mat centered = b.a_rows.rowwise() - b.a_mean.transpose();
  Mat phi = (centered - sgn * b.ms_rows) * D.transpose() * inv_f;

  const Vec psi_coef = pi * (b.fdot_hat * inv_f) + sgn * inv_f * (D * b.m_hq);
  phi.noalias() -= b.psi_rows * psi_coef.transpose();
  phi.noalias() -= (b.kh.array() - kbar).matrix() * (pi * inv_f).transpose();
  return phi;
}

InfluenceComponents influence_rows(const Vec& y, const Vec& x,
                                   const Design& design, const TauFit& fit,
                                   const EffectEstimate& effect,
                                   const PolicySpec& policy,
                                   const InferenceOptions& opts) {
  InfluenceComponents comp;
  comp.blocks = build_inference_blocks(y, x, design, fit, opts);
  comp.D << -policy.ldot0, 0.0, policy.mu * policy.sdot0, -policy.sdot0;
  comp.pi = Vec(2);
  comp.pi << effect.pi_l, effect.pi_s;
  comp.phi_rows = combine_influence_rows(comp.blocks, comp.D, comp.pi);
  return comp;
}

InfluenceComponents influence_rows_simultaneous(const Vec& y,
                                                const Design& design,
                                                const TauFit& fit,
                                                const EffectEstimate& effect,
                                                const PolicySpec& policy,
                                                const InferenceOptions& opts) {
  InfluenceComponents comp;
  comp.blocks = build_inference_blocks_simultaneous(y, design, fit, opts);
  comp.D << -policy.ldot_vec[0], 0.0, 0.0, -policy.ldot_vec[1];
  comp.pi = Vec(2);
  comp.pi << effect.pi_component[0], effect.pi_component[1];
  comp.phi_rows = combine_influence_rows(comp.blocks, comp.D, comp.pi);
  return comp;
}

EffectCI effect_ci(const InfluenceComponents& comp, const Vec& l, double point,
                   double level) {
  if (!(level > 0.0 && level < 1.0)) {
    fail(ErrKind::invalid_config, "confidence level must lie in (0,1)");
  }
  const Vec proj = comp.phi_rows * l;
  const double n = static_cast<double>(proj.size());
  const double se = std::sqrt(proj.squaredNorm()) / n;
  const double z = normal_quantile(0.5 * (1.0 + level));
  return {se, point - z * se, point + z * se};
}

ScaleTestResult scale_effect_ttest(const InferenceBlocks& b, double mu) {
  const Eigen::Index n = b.a_rows.rows();
  Eigen::Vector2d d_s(mu, -1.0);  // sdot(0) = 1 without loss of generality

  ScaleTestResult out;
  out.gamma_hat = d_s.dot(b.a_mean);

  const double sgn = b.flipped ? -1.0 : 1.0;
  const Mat centered = b.a_rows.rowwise() - b.a_mean.transpose();
  const Vec proj = (centered - sgn * b.ms_rows) * d_s -
                   b.psi_rows * (sgn * d_s.dot(b.m_hq));
  out.v_hat = proj.squaredNorm() / static_cast<double>(n);
  if (!(out.v_hat > 0.0) || !std::isfinite(out.v_hat)) {
    fail(ErrKind::zero_variance, "scale-test variance is not positive");
  }
  out.t_stat = std::sqrt(static_cast<double>(n)) * out.gamma_hat /
               std::sqrt(out.v_hat);
  out.p_value = std::erfc(std::fabs(out.t_stat) * 0.7071067811865475244);
  return out;
}

}  // namespace upe
