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

#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "test_util.hpp"
#include "upe/error.hpp"
#include "upe/links.hpp"
#include "upe/mc.hpp"

using namespace upe;

namespace {

McConfig small_config() {
  McConfig cfg;
  cfg.dgp = {0.0, 1.0, 0.0, 1.0, 1.0};
  cfg.n = 200;
  cfg.reps = 60;
  cfg.taus = {0.5};
  cfg.links = {LinkKind::probit};
  cfg.policy.ldot0 = 1.0;
  cfg.policy.sdot0 = -1.0;
  cfg.policy.mu = 0.0;
  cfg.seed = 2024;
  return cfg;
}

double cell_value(const McSummary& s, const std::string& est,
                  const std::string& stat, double tau, double gamma) {
  for (const auto& c : s.cells) {
    if (c.estimator == est && c.statistic == stat && c.tau == tau &&
        c.gamma == gamma) {
      return c.value;
    }
  }
  FAIL("cell not found: ", est, " ", stat);
  return 0.0;
}

}  // namespace

TEST_CASE("summary is identical for any worker count") {
  McConfig cfg = small_config();
  cfg.reps = 40;
  cfg.workers = 1;
  const McSummary a = run_bias_table(cfg);
  cfg.workers = 4;
  const McSummary b = run_bias_table(cfg);
  REQUIRE(a.cells.size() == b.cells.size());
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    CHECK(a.cells[i].value == b.cells[i].value);
    CHECK(a.cells[i].mc_se == b.cells[i].mc_se);
    CHECK(a.cells[i].statistic == b.cells[i].statistic);
  }

  const auto dir1 = upetest::tmp_dir("mc_det1");
  const auto dir2 = upetest::tmp_dir("mc_det2");
  write_mc_outputs(a, dir1.string());
  write_mc_outputs(b, dir2.string());
  CHECK(upetest::slurp(dir1 / "bias_table.csv") ==
        upetest::slurp(dir2 / "bias_table.csv"));
}

TEST_CASE("mse = bias^2 + variance per cell") {
  McConfig cfg = small_config();
  cfg.taus = {0.25, 0.5};
  cfg.links = {LinkKind::probit, LinkKind::logit};
  const McSummary s = run_bias_table(cfg);
  for (const auto& est : {"location", "scale"}) {
    for (const auto& link : {"probit", "logit"}) {
      for (double tau : cfg.taus) {
        double bias = 0, var = 0, mse = 0;
        for (const auto& c : s.cells) {
          if (c.estimator == est && c.link == link && c.tau == tau) {
            if (c.statistic == "bias") bias = c.value;
            if (c.statistic == "variance") var = c.value;
            if (c.statistic == "mse") mse = c.value;
          }
        }
        CHECK(std::fabs(mse - (bias * bias + var)) < 1e-12);
      }
    }
  }
}

TEST_CASE("doubling the replications shrinks the MC standard error") {
  McConfig cfg = small_config();
  cfg.reps = 300;
  const McSummary a = run_bias_table(cfg);
  cfg.reps = 600;
  const McSummary b = run_bias_table(cfg);
  double se_a = 0.0, se_b = 0.0;
  for (const auto& c : a.cells) {
    if (c.statistic == "bias" && c.estimator == "location") se_a = c.mc_se;
  }
  for (const auto& c : b.cells) {
    if (c.statistic == "bias" && c.estimator == "location") se_b = c.mc_se;
  }
  const double ratio = se_a / se_b;
  CHECK(ratio > std::sqrt(2.0) * 0.8);
  CHECK(ratio < std::sqrt(2.0) * 1.2);
}

TEST_CASE("bias table tracks the closed-form truth") {
  McConfig cfg = small_config();
  cfg.n = 500;
  cfg.reps = 300;
  cfg.taus = {0.5};
  const McSummary s = run_bias_table(cfg);
  CHECK(std::fabs(cell_value(s, "location", "bias", 0.5, 1.0)) < 0.06);
  CHECK(std::fabs(cell_value(s, "scale", "bias", 0.5, 1.0)) < 0.03);
  CHECK(cell_value(s, "estimation", "failure_rate", 0.5, 1.0) == 0.0);
}

TEST_CASE("coverage lands near the nominal level") {
  McConfig cfg = small_config();
  cfg.n = 400;
  cfg.reps = 250;
  cfg.gamma_grid = {1.0};
  const McSummary s = run_coverage_table(cfg);
  const double cov_l = cell_value(s, "location", "coverage", 0.5, 1.0);
  const double cov_s = cell_value(s, "scale", "coverage", 0.5, 1.0);
  CHECK(cov_l > 0.85);
  CHECK(cov_l <= 1.0);
  CHECK(cov_s > 0.85);
  CHECK(cov_s <= 1.0);
}

TEST_CASE("power curve size-adjusts to the nominal level by construction") {
  McConfig cfg = small_config();
  cfg.dgp.mu_x = 1.0;
  cfg.policy.mu = 0.0;
  cfg.n = 300;
  cfg.reps = 400;
  cfg.gamma_grid = {-0.3, 0.0, 0.3};
  const McSummary s = run_power_curve(cfg);
  CHECK(cell_value(s, "scale_ttest", "reject_size_adj", 0.5, 0.0) ==
        doctest::Approx(0.05).epsilon(1e-12));
  const double raw0 = cell_value(s, "scale_ttest", "reject_raw", 0.5, 0.0);
  CHECK(raw0 > 0.005);
  CHECK(raw0 < 0.12);
  // power rises away from the null
  const double p_neg = cell_value(s, "scale_ttest", "reject_size_adj", 0.5, -0.3);
  const double p_pos = cell_value(s, "scale_ttest", "reject_size_adj", 0.5, 0.3);
  CHECK(p_neg > 0.5);
  CHECK(p_pos > 0.5);

  REQUIRE(!s.power_series.empty());
  CHECK(s.power_series[0].gamma.front() == -0.3);
  CHECK(s.power_series[0].gamma.back() == 0.3);
}

TEST_CASE("power grows with |gamma| and with the sample size") {
  McConfig cfg = small_config();
  cfg.dgp.gamma = 0.0;
  cfg.dgp.mu_x = 1.0;
  cfg.policy.mu = 0.0;
  cfg.reps = 300;
  cfg.gamma_grid = {0.0, 0.2, 0.4};

  cfg.n = 500;
  const McSummary s500 = run_power_curve(cfg);
  cfg.n = 1000;
  const McSummary s1000 = run_power_curve(cfg);

  auto adj = [&](const McSummary& s, double gamma) {
    return cell_value(s, "scale_ttest", "reject_size_adj", 0.5, gamma);
  };
  auto se = [&](const McSummary& s, double gamma) {
    for (const auto& c : s.cells) {
      if (c.statistic == "reject_size_adj" && c.gamma == gamma) return c.mc_se;
    }
    return 0.0;
  };
  // monotone non-decreasing in |gamma| up to MC noise
  CHECK(adj(s500, 0.4) >= adj(s500, 0.2) - 2.0 * (se(s500, 0.4) + se(s500, 0.2)));
  CHECK(adj(s1000, 0.4) >=
        adj(s1000, 0.2) - 2.0 * (se(s1000, 0.4) + se(s1000, 0.2)));
  // the larger sample dominates pointwise up to MC noise
  for (double g : {0.2, 0.4}) {
    CHECK(adj(s1000, g) >= adj(s500, g) - 2.0 * (se(s1000, g) + se(s500, g)));
  }
}

TEST_CASE("normality diagnostics") {
  McConfig cfg = small_config();
  cfg.n = 400;
  cfg.reps = 250;
  const McSummary s = run_normality_diag(cfg);
  const double p_loc = cell_value(s, "location", "ks_pvalue", 0.5, 1.0);
  CHECK(p_loc > 0.01);
  REQUIRE(!s.qq_series.empty());
  CHECK(s.qq_series[0].theoretical.size() == s.qq_series[0].empirical.size());

  McConfig degenerate = small_config();
  degenerate.reps = 1;
  CHECK_THROWS_AS(run_normality_diag(degenerate), Error);
  try {
    run_normality_diag(degenerate);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrKind::minimum_reps);
  }
}

TEST_CASE("config validation") {
  McConfig cfg = small_config();
  cfg.policy.mu = 0.7;  // truth-based tables need the pivot at mu_x
  CHECK_THROWS_AS(run_bias_table(cfg), Error);

  McConfig cfg2 = small_config();
  cfg2.gamma_grid.clear();
  CHECK_THROWS_AS(run_coverage_table(cfg2), Error);

  McConfig cfg3 = small_config();
  cfg3.taus = {1.5};
  CHECK_THROWS_AS(run_bias_table(cfg3), Error);
}

TEST_CASE("ks test against the normal reference") {
  std::vector<double> good(800), bad(800);
  for (int i = 0; i < 800; ++i) {
    good[i] = normal_quantile((i + 0.5) / 800.0);
    bad[i] = good[i] + 0.4;
  }
  const auto [d1, p1] = ks_normal_test(good);
  const auto [d2, p2] = ks_normal_test(bad);
  CHECK(p1 > 0.5);
  CHECK(d1 < 0.01);
  CHECK(p2 < 1e-6);
  CHECK(d2 > 0.1);
}
