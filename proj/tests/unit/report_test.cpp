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
#include <string>

#include "test_util.hpp"
#include "upe/error.hpp"
#include "upe/quantile.hpp"
#include "upe/report.hpp"

using namespace upe;

namespace {

Dataset synthetic_dataset(std::uint64_t seed, int n, double gamma = 1.0) {
  Dataset d;
  Vec x;
  upetest::draw_linear_sample(seed, n, gamma, 0.0, x, d.y);
  d.x = x;
  d.w = Mat(n, 0);
  d.y_name = "y";
  d.x_names = {"x"};
  return d;
}

RunConfig basic_config() {
  RunConfig cfg;
  cfg.taus = {0.25, 0.5};
  cfg.links = {LinkKind::probit};
  cfg.policy.ldot0 = 1.0;
  cfg.policy.sdot0 = -1.0;
  cfg.policy.mu = 0.0;
  return cfg;
}

}  // namespace

TEST_CASE("estimate report layout") {
  const Dataset data = synthetic_dataset(301, 800);
  const EffectReport rep = run_estimate(data, basic_config());
  REQUIRE(rep.rows.size() == 6);  // 2 taus x {location, scale, total}
  CHECK(rep.rows[0].effect == "location");
  CHECK(rep.rows[1].effect == "scale");
  CHECK(rep.rows[2].effect == "total");
  CHECK(rep.rows[2].estimate ==
        rep.rows[0].estimate + rep.rows[1].estimate);
  CHECK(rep.scale_tests.size() == 2);
  CHECK(rep.rows[1].elasticity.has_value());
  CHECK_FALSE(rep.rows[0].elasticity.has_value());
  for (const auto& r : rep.rows) CHECK(r.mu == 0.0);
}

TEST_CASE("csv and json outputs are deterministic with pinned headers") {
  const Dataset data = synthetic_dataset(302, 600);
  const EffectReport rep = run_estimate(data, basic_config());
  const auto dir = upetest::tmp_dir("report1");
  write_report_csv(rep, (dir / "a.csv").string());
  write_report_csv(rep, (dir / "b.csv").string());
  const std::string a = upetest::slurp(dir / "a.csv");
  CHECK(a == upetest::slurp(dir / "b.csv"));
  CHECK(a.substr(0, a.find('\n')) == std::string(kEffectsCsvHeader));

  write_scale_test_csv(rep, (dir / "t.csv").string());
  const std::string t = upetest::slurp(dir / "t.csv");
  CHECK(t.substr(0, t.find('\n')) == std::string(kScaleTestCsvHeader));
}

TEST_CASE("json report round-trips bitwise") {
  const Dataset data = synthetic_dataset(303, 700);
  RunConfig cfg = basic_config();
  cfg.taus = {0.3, 0.6, 0.9};
  const EffectReport rep = run_estimate(data, cfg);
  const auto dir = upetest::tmp_dir("report2");
  const auto path = (dir / "report.json").string();
  write_report_json(rep, path);
  const EffectReport back = read_report_json(path);

  CHECK(back.schema_version == rep.schema_version);
  CHECK(back.n == rep.n);
  CHECK(back.bandwidth == rep.bandwidth);
  REQUIRE(back.rows.size() == rep.rows.size());
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    CHECK(back.rows[i].estimate == rep.rows[i].estimate);
    CHECK(back.rows[i].se == rep.rows[i].se);
    CHECK(back.rows[i].ci_lo == rep.rows[i].ci_lo);
    CHECK(back.rows[i].ci_hi == rep.rows[i].ci_hi);
    CHECK(back.rows[i].q_hat == rep.rows[i].q_hat);
    CHECK(back.rows[i].f_hat == rep.rows[i].f_hat);
    CHECK(back.rows[i].elasticity.has_value() ==
          rep.rows[i].elasticity.has_value());
    if (rep.rows[i].elasticity) {
      CHECK(*back.rows[i].elasticity == *rep.rows[i].elasticity);
    }
  }
  REQUIRE(back.scale_tests.size() == rep.scale_tests.size());
  for (std::size_t i = 0; i < rep.scale_tests.size(); ++i) {
    CHECK(back.scale_tests[i].t_stat == rep.scale_tests[i].t_stat);
    CHECK(back.scale_tests[i].p_value == rep.scale_tests[i].p_value);
  }
}

TEST_CASE("log-outcome mode estimates on log(y) directly") {
  Dataset data = synthetic_dataset(304, 900);
  data.y = (data.y.array() * 0.2 + 3.0).exp();  // strictly positive outcome
  RunConfig cfg = basic_config();
  cfg.taus = {0.5};
  cfg.log_outcome = true;
  const EffectReport rep = run_estimate(data, cfg);
  const Vec logy = data.y.array().log();
  const std::span<const double> ys(logy.data(),
                                   static_cast<std::size_t>(logy.size()));
  CHECK(rep.rows[0].q_hat == sample_quantile(ys, 0.5));
  // elasticity = pi_s / sdot0 in log mode
  CHECK(*rep.rows[1].elasticity ==
        doctest::Approx(rep.rows[1].estimate / cfg.policy.sdot0).epsilon(1e-14));

  Dataset neg = synthetic_dataset(304, 900);  // has negative outcomes
  CHECK_THROWS_AS(run_estimate(neg, cfg), Error);
}

TEST_CASE("zero scale derivative zeroes the scale column") {
  const Dataset data = synthetic_dataset(305, 600);
  RunConfig cfg = basic_config();
  cfg.policy.sdot0 = 0.0;
  const EffectReport rep = run_estimate(data, cfg);
  for (const auto& r : rep.rows) {
    if (r.effect == "scale") {
      CHECK(r.estimate == 0.0);
      CHECK_FALSE(r.elasticity.has_value());
    }
  }
}

TEST_CASE("simultaneous mode report") {
  const int n = 900;
  Vec x1(n), x2(n), u(n);
  rng_fill_normal(306, 0, 0, n, x1.data());
  rng_fill_normal(306, 0, 1, n, x2.data());
  rng_fill_normal(306, 0, 2, n, u.data());
  Dataset data;
  data.y = x1 + 2.0 * x2 + u;
  data.x = Mat(n, 2);
  data.x.col(0) = x1;
  data.x.col(1) = x2;
  data.w = Mat(n, 0);
  RunConfig cfg;
  cfg.taus = {0.5};
  cfg.links = {LinkKind::probit};
  cfg.policy.ldot_vec = {1.0, -1.0};
  const EffectReport rep = run_estimate(data, cfg);
  REQUIRE(rep.rows.size() == 3);
  CHECK(rep.rows[0].effect == "location_1");
  CHECK(rep.rows[1].effect == "location_2");
  CHECK(rep.rows[2].effect == "compensated");
  CHECK(rep.rows[2].estimate ==
        doctest::Approx(rep.rows[0].estimate + rep.rows[1].estimate)
            .epsilon(1e-14));
  CHECK(rep.scale_tests.empty());
  CHECK(rep.rows[2].se > 0.0);
}

TEST_CASE("row floor and error context") {
  const Dataset tiny = synthetic_dataset(307, 20);
  CHECK_THROWS_AS(run_estimate(tiny, basic_config()), Error);

  // extreme quantile on a modest sample: single-class indicator, and the
  // failing tau is named in the message
  const Dataset data = synthetic_dataset(308, 500);
  RunConfig cfg = basic_config();
  cfg.taus = {0.999};
  try {
    run_estimate(data, cfg);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("0.999") != std::string::npos);
  }
}
