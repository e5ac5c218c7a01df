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

#include "upe/fit.hpp"

#include <cmath>
#include <string>

#include "upe/error.hpp"

namespace upe {

namespace {

constexpr double kWeightFloor = 1e-14;

struct ObsState {
  Vec eta, cdf, pdf, pdf_deriv;
  Vec resid;  // dl/deta per observation
  Vec curv;   // d2l/deta2 per observation (negative for both links)
  double mean_loglik = 0.0;
};

ObsState evaluate(const Mat& Z, const Vec& theta, LinkKind link,
                  const std::vector<std::uint8_t>& ind) {
  const Eigen::Index n = Z.rows();
  ObsState s;
  s.eta = Z * theta;
  s.cdf.resize(n);
  s.pdf.resize(n);
  s.pdf_deriv.resize(n);
  s.resid.resize(n);
  s.curv.resize(n);
  double ll = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const LinkEval e = link_eval(link, s.eta[i]);
    const double G = clip_prob(e.cdf);
    s.cdf[i] = G;
    s.pdf[i] = link == LinkKind::logit ? G * (1.0 - G) : e.pdf;
    s.pdf_deriv[i] = link == LinkKind::logit ? s.pdf[i] * (1.0 - 2.0 * G)
                                             : e.pdf_deriv;
    const double y = ind[i] ? 1.0 : 0.0;
    ll += y * std::log(G) + (1.0 - y) * std::log1p(-G);
    if (link == LinkKind::logit) {
      s.resid[i] = y - G;
      s.curv[i] = -s.pdf[i];
    } else {
      // r = g (y - G) / (G(1-G)); r' = -r (eta + r) for the probit.
      const double r = s.pdf[i] * (y - G) / (G * (1.0 - G));
      s.resid[i] = r;
      s.curv[i] = -r * (s.eta[i] + r);
    }
  }
  s.mean_loglik = ll / static_cast<double>(n);
  return s;
}

}  // namespace

FittedCdfModel fit_binary_link(const std::vector<std::uint8_t>& indicator,
                               const Mat& Z, LinkKind link,
                               const FitOptions& opts, int intercept_col,
                               double q_hat) {
  const Eigen::Index n = Z.rows();
  const Eigen::Index d = Z.cols();
  if (static_cast<Eigen::Index>(indicator.size()) != n) {
    fail(ErrKind::dimension_mismatch, "indicator length does not match Z");
  }
  std::size_t ones = 0;
  for (auto v : indicator) ones += v ? 1 : 0;
  if (ones == 0 || ones == indicator.size()) {
    fail(ErrKind::all_one_class, "indicator has a single class");
  }
  {
    Eigen::ColPivHouseholderQR<Mat> qr(Z);
    if (qr.rank() < d) {
      fail(ErrKind::rank_deficient_design,
           "design rank " + std::to_string(qr.rank()) + " < " +
               std::to_string(d));
    }
  }

  FittedCdfModel model;
  model.link = link;
  model.q_hat = q_hat;
  Vec theta = Vec::Zero(d);
  if (intercept_col >= 0 && intercept_col < d) {
    theta[intercept_col] =
        link_inverse(link, static_cast<double>(ones) / static_cast<double>(n));
  }

  ObsState state = evaluate(Z, theta, link, indicator);
  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    const Vec grad = Z.transpose() * state.resid / static_cast<double>(n);
    model.gradient_norm = grad.lpNorm<Eigen::Infinity>();
    model.iterations = iter - 1;
    if (model.gradient_norm <= opts.tol) {
      model.converged = true;
      break;
    }
    const Mat hess =
        Z.transpose() * state.curv.asDiagonal() * Z / static_cast<double>(n);
    const Vec step = hess.ldlt().solve(-grad);
    if (!step.allFinite()) {
      fail(ErrKind::separation_detected, "Newton step is not finite");
    }

    // Near the optimum the Newton gain drops below the floating-point
    // resolution of the mean log-likelihood; accept within that slack and
    // let the gradient test terminate.
    const double slack = 1e-14 * (1.0 + std::fabs(state.mean_loglik));
    double scale = 1.0;
    bool improved = false;
    for (int halv = 0; halv <= opts.max_halvings; ++halv) {
      const Vec cand = theta + scale * step;
      ObsState next = evaluate(Z, cand, link, indicator);
      if (next.mean_loglik >= state.mean_loglik - slack) {
        theta = cand;
        state = std::move(next);
        improved = true;
        break;
      }
      scale *= 0.5;
    }
    if (!improved) {
      fail(ErrKind::separation_detected,
           "step halving failed to improve the likelihood");
    }
    if (theta.lpNorm<Eigen::Infinity>() > opts.theta_cap) {
      fail(ErrKind::separation_detected, "coefficients diverged");
    }
  }
  if (!model.converged) {
    const Vec grad = Z.transpose() * state.resid / static_cast<double>(n);
    model.gradient_norm = grad.lpNorm<Eigen::Infinity>();
    model.iterations = opts.max_iter;
  }

  model.theta = std::move(theta);
  model.eta = std::move(state.eta);
  model.cdf = std::move(state.cdf);
  model.pdf = std::move(state.pdf);
  model.pdf_deriv = std::move(state.pdf_deriv);
  return model;
}

Mat score_rows(const FittedCdfModel& model,
               const std::vector<std::uint8_t>& indicator, const Mat& Z) {
  const Eigen::Index n = Z.rows();
  if (static_cast<Eigen::Index>(indicator.size()) != n ||
      model.cdf.size() != n) {
    fail(ErrKind::dimension_mismatch, "score_rows inputs do not conform");
  }
  Vec r(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double G = model.cdf[i];
    const double denom = G * (1.0 - G);
    if (!(denom >= kWeightFloor) || !std::isfinite(denom)) {
      fail(ErrKind::numerical_underflow, "G(1-G) below floor in score");
    }
    const double y = indicator[i] ? 1.0 : 0.0;
    r[i] = model.pdf[i] * (y - G) / denom;
  }
  return r.asDiagonal() * Z;
}

Mat hessian_avg(const FittedCdfModel& model, const Mat& Z) {
  const Eigen::Index n = Z.rows();
  if (model.cdf.size() != n) {
    fail(ErrKind::dimension_mismatch, "hessian_avg inputs do not conform");
  }
  Vec w(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double denom = model.cdf[i] * (1.0 - model.cdf[i]);
    if (!(denom >= kWeightFloor) || !std::isfinite(denom)) {
      fail(ErrKind::numerical_underflow, "G(1-G) below floor in hessian");
    }
    w[i] = model.pdf[i] * model.pdf[i] / denom;
  }
  Mat H = Z.transpose() * w.asDiagonal() * Z / static_cast<double>(n);
  return 0.5 * (H + H.transpose());
}

Mat lambda_weights(const FittedCdfModel& model, const Mat& Z) {
  const Eigen::Index n = Z.rows();
  if (model.cdf.size() != n) {
    fail(ErrKind::dimension_mismatch, "lambda_weights inputs do not conform");
  }
  if (model.link == LinkKind::logit) return Z;  // g = G(1-G) exactly
  Vec w(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double denom = model.cdf[i] * (1.0 - model.cdf[i]);
    if (!(denom >= kWeightFloor) || !std::isfinite(denom)) {
      fail(ErrKind::numerical_underflow, "G(1-G) below floor in lambda");
    }
    w[i] = model.pdf[i] / denom;
  }
  return w.asDiagonal() * Z;
}

}  // namespace upe
