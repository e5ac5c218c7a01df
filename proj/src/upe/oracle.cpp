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

#include "upe/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <thread>

#include "upe/error.hpp"
#include "upe/links.hpp"
#include "upe/quantile.hpp"
#include "upe/rng.hpp"
#include "upe/textio.hpp"

namespace upe {

double NormalLinearDgp::r_squared() const {
  const double sig = gamma * gamma * sigma_x * sigma_x;
  return sig / (sig + sigma_u * sigma_u);
}

double NormalLinearDgp::q_tau_y(double tau) const {
  const double sd =
      std::sqrt(sigma_u * sigma_u + gamma * gamma * sigma_x * sigma_x);
  return lambda + mu_x * gamma + sd * normal_quantile(tau);
}

void NormalLinearDgp::validate() const {
  if (!(sigma_x > 0.0) || !(sigma_u > 0.0) || !std::isfinite(lambda) ||
      !std::isfinite(gamma) || !std::isfinite(mu_x)) {
    fail(ErrKind::invalid_config, "invalid normal linear model parameters");
  }
}

ClosedFormEffects closed_form_effects(const NormalLinearDgp& dgp,
                                      const PolicySpec& policy, double tau) {
  dgp.validate();
  if (!(tau > 0.0 && tau < 1.0)) {
    fail(ErrKind::invalid_config, "tau must lie in (0,1)");
  }
  if (std::fabs(policy.mu - dgp.mu_x) >
      1e-9 * std::max(1.0, std::fabs(dgp.mu_x))) {
    fail(ErrKind::pivot_mismatch,
         "closed form is derived at the pivot mu = mu_x");
  }

  const double z = normal_quantile(tau);
  const double root_r2 = std::sqrt(dgp.r_squared());
  ClosedFormEffects out;
  out.pi_l = policy.ldot0 * dgp.gamma;
  out.pi_s = policy.sdot0 * root_r2 * dgp.sigma_x * std::fabs(dgp.gamma) * z;
  out.q_tau_y = dgp.q_tau_y(tau);

  // E = sqrt(R^2) Q_tau[(X-mu_x)gamma] / Q_tau[Y]; the 0/0 case at the
  // median of a centered model has limit R^2.
  const double q_xg = dgp.sigma_x * std::fabs(dgp.gamma) * z;
  if (out.q_tau_y != 0.0) {
    out.elasticity = root_r2 * q_xg / out.q_tau_y;
  } else if (q_xg == 0.0) {
    out.elasticity = dgp.r_squared();
  }
  return out;
}

namespace {

struct SimArrays {
  std::vector<double> loc_up, loc_dn, scale_up, scale_dn;
};

// Draws are addressed globally by index, so shard boundaries cannot change
// the stream; arrays are identical for any worker count.
SimArrays simulate_channels(const NormalLinearDgp& dgp, const PolicySpec& policy,
                            double delta, std::int64_t n_sim,
                            std::uint64_t seed, std::uint64_t replicate,
                            int workers) {
  const auto n = static_cast<std::size_t>(n_sim);
  SimArrays a;
  a.loc_up.resize(n);
  a.loc_dn.resize(n);
  a.scale_up.resize(n);
  a.scale_dn.resize(n);

  int nthreads = workers > 0
                     ? workers
                     : static_cast<int>(std::thread::hardware_concurrency());
  nthreads = std::max(1, std::min<int>(nthreads, 16));

  const double ld = policy.ldot0;
  const double sd = policy.sdot0;
  const double mu = policy.mu;

  auto run_range = [&](std::size_t lo, std::size_t hi) {
    constexpr std::size_t kChunk = 8192;
    std::vector<double> xs(kChunk), us(kChunk);
    for (std::size_t start = lo; start < hi; start += kChunk) {
      const std::size_t m = std::min(kChunk, hi - start);
      rng_fill_normal_at(seed, replicate, 0, start, m, xs.data());
      rng_fill_normal_at(seed, replicate, 1, start, m, us.data());
      for (std::size_t k = 0; k < m; ++k) {
        const double x = dgp.mu_x + dgp.sigma_x * xs[k];
        const double u = dgp.sigma_u * us[k];
        const double base = dgp.lambda + u;
        // pure location: X + ldot * delta
        a.loc_up[start + k] = base + dgp.gamma * (x + ld * delta);
        a.loc_dn[start + k] = base + dgp.gamma * (x - ld * delta);
        // pure scale: (X - mu)(1 + sdot * delta) + mu
        a.scale_up[start + k] =
            base + dgp.gamma * ((x - mu) * (1.0 + sd * delta) + mu);
        a.scale_dn[start + k] =
            base + dgp.gamma * ((x - mu) * (1.0 - sd * delta) + mu);
      }
    }
  };

  if (nthreads == 1) {
    run_range(0, n);
  } else {
    std::vector<std::thread> pool;
    const std::size_t per = (n + nthreads - 1) / nthreads;
    for (int t = 0; t < nthreads; ++t) {
      const std::size_t lo = std::min(n, static_cast<std::size_t>(t) * per);
      const std::size_t hi = std::min(n, lo + per);
      if (lo < hi) pool.emplace_back(run_range, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  return a;
}

}  // namespace

std::vector<BruteForceResult> brute_force_effect_grid(
    const NormalLinearDgp& dgp, const PolicySpec& policy,
    const std::vector<double>& taus, double delta, std::int64_t n_sim,
    std::uint64_t seed, int workers) {
  dgp.validate();
  if (!(delta > 0.0 && delta <= 0.1)) {
    fail(ErrKind::invalid_config, "delta must lie in (0, 0.1]");
  }
  if (n_sim < 2) fail(ErrKind::invalid_config, "n_sim too small");

  SimArrays a = simulate_channels(dgp, policy, delta, n_sim, seed, 0, workers);
  std::sort(a.loc_up.begin(), a.loc_up.end());
  std::sort(a.loc_dn.begin(), a.loc_dn.end());
  std::sort(a.scale_up.begin(), a.scale_up.end());
  std::sort(a.scale_dn.begin(), a.scale_dn.end());

  std::vector<BruteForceResult> out;
  out.reserve(taus.size());
  for (double tau : taus) {
    BruteForceResult r;
    r.pi_l = (sorted_quantile(a.loc_up, tau) - sorted_quantile(a.loc_dn, tau)) /
             (2.0 * delta);
    r.pi_s =
        (sorted_quantile(a.scale_up, tau) - sorted_quantile(a.scale_dn, tau)) /
        (2.0 * delta);
    out.push_back(r);
  }
  return out;
}

BruteForceResult brute_force_effect(const NormalLinearDgp& dgp,
                                    const PolicySpec& policy, double tau,
                                    double delta, std::int64_t n_sim,
                                    std::uint64_t seed, int workers) {
  return brute_force_effect_grid(dgp, policy, {tau}, delta, n_sim, seed,
                                 workers)[0];
}

std::vector<OracleComparisonRow> oracle_compare(
    const NormalLinearDgp& dgp, const PolicySpec& policy,
    const std::vector<double>& taus, double delta, std::int64_t n_sim,
    int replicates, std::uint64_t seed, int workers) {
  if (replicates < 2) {
    fail(ErrKind::invalid_config, "oracle_compare needs >= 2 replicates");
  }
  const std::size_t nt = taus.size();
  Mat pil(replicates, nt), pis(replicates, nt);
  for (int r = 0; r < replicates; ++r) {
    const auto grid = brute_force_effect_grid(
        dgp, policy, taus, delta, n_sim, seed + static_cast<std::uint64_t>(r),
        workers);
    for (std::size_t t = 0; t < nt; ++t) {
      pil(r, t) = grid[t].pi_l;
      pis(r, t) = grid[t].pi_s;
    }
  }

  std::vector<OracleComparisonRow> rows;
  for (std::size_t t = 0; t < nt; ++t) {
    const ClosedFormEffects cf = closed_form_effects(dgp, policy, taus[t]);
    for (int ch = 0; ch < 2; ++ch) {
      const Vec col = ch == 0 ? pil.col(t) : pis.col(t);
      OracleComparisonRow row;
      row.tau = taus[t];
      row.channel = ch == 0 ? "location" : "scale";
      row.closed_form = ch == 0 ? cf.pi_l : cf.pi_s;
      row.brute_force = col.mean();
      const double var =
          (col.array() - row.brute_force).square().sum() /
          static_cast<double>(replicates - 1);
      row.mc_se = std::sqrt(var / static_cast<double>(replicates));
      row.tolerance = std::max(3.0 * row.mc_se, 5e-3);
      row.pass = std::fabs(row.brute_force - row.closed_form) <= row.tolerance;
      rows.push_back(row);
    }
  }
  return rows;
}

void write_oracle_csv(const std::vector<OracleComparisonRow>& rows,
                      const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrKind::io_error, "cannot open " + path);
  f << "tau,channel,closed_form,brute_force,mc_se,tolerance,pass\n";
  for (const auto& r : rows) {
    f << fmt_sig9(r.tau) << ',' << r.channel << ',' << fmt_sig9(r.closed_form)
      << ',' << fmt_sig9(r.brute_force) << ',' << fmt_sig9(r.mc_se) << ','
      << fmt_sig9(r.tolerance) << ',' << (r.pass ? 1 : 0) << '\n';
  }
}

std::pair<Vec, Vec> gauss_hermite(int n) {
  if (n < 2) fail(ErrKind::quadrature_failure, "need at least 2 nodes");
  Mat J = Mat::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = std::sqrt(0.5 * k);
    J(k, k - 1) = b;
    J(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(J);
  if (es.info() != Eigen::Success) {
    fail(ErrKind::quadrature_failure, "Jacobi matrix eigensolve failed");
  }
  Vec nodes = es.eigenvalues();
  Vec weights(n);
  const double sqrt_pi = 1.7724538509055160273;
  for (int k = 0; k < n; ++k) {
    const double v0 = es.eigenvectors()(0, k);
    weights[k] = sqrt_pi * v0 * v0;
  }
  return {std::move(nodes), std::move(weights)};
}

double stein_check(const NormalLinearDgp& dgp, double tau, int n_quad) {
  dgp.validate();
  const auto [nodes, weights] = gauss_hermite(n_quad);
  const double q = dgp.q_tau_y(tau);
  const double su2 = dgp.sigma_u * dgp.sigma_u;
  const double inv_sqrt_pi = 0.5641895835477562869;

  // m(x) = gamma f_U(q - lambda - gamma x); m'(x) = -gamma^2 f_U'(...).
  auto f_u = [&](double t) {
    return std::exp(-0.5 * t * t / su2) /
           (dgp.sigma_u * 2.5066282746310005024);
  };
  double lhs = 0.0, rhs = 0.0;
  for (int k = 0; k < nodes.size(); ++k) {
    const double x = dgp.mu_x + dgp.sigma_x * 1.4142135623730950488 * nodes[k];
    const double t = q - dgp.lambda - dgp.gamma * x;
    const double m = dgp.gamma * f_u(t);
    const double mprime = -dgp.gamma * dgp.gamma * (-t / su2) * f_u(t);
    lhs += weights[k] * m * (x - dgp.mu_x);
    rhs += weights[k] * mprime;
  }
  lhs *= inv_sqrt_pi;
  rhs *= inv_sqrt_pi * dgp.sigma_x * dgp.sigma_x;
  return std::fabs(lhs - rhs);
}

}  // namespace upe
