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

#include "upe/report.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "upe/error.hpp"
#include "upe/textio.hpp"

namespace upe {

using nlohmann::json;

void RunConfig::validate() const {
  if (taus.empty()) fail(ErrKind::invalid_config, "no quantile levels");
  for (double t : taus) {
    if (!(t > 0.0 && t < 1.0)) fail(ErrKind::invalid_config, "tau outside (0,1)");
  }
  if (links.empty()) fail(ErrKind::invalid_config, "no links selected");
  if (!(conf_level > 0.0 && conf_level < 1.0)) {
    fail(ErrKind::invalid_config, "confidence level outside (0,1)");
  }
  if (bandwidth && !(*bandwidth > 0.0)) {
    fail(ErrKind::invalid_config, "bandwidth override must be positive");
  }
}

EffectReport run_estimate(const Dataset& data, const RunConfig& config) {
  config.validate();
  if (data.n() < 30) {
    fail(ErrKind::invalid_config,
         "estimation needs at least 30 rows, got " + std::to_string(data.n()));
  }
  config.policy.validate(static_cast<int>(data.x.cols()));

  Vec y = data.y;
  if (config.log_outcome) {
    if ((y.array() <= 0.0).any()) {
      fail(ErrKind::invalid_config,
           "log-outcome mode needs a strictly positive outcome");
    }
    y = y.array().log();
  }

  BasisSpec basis;
  basis.x_basis.assign(static_cast<std::size_t>(data.x.cols()), config.x_basis);
  const Design design = build_design(data.x, data.w, basis);

  KernelSpec kernel;
  const KernelSpec* kernel_ptr = nullptr;
  if (config.bandwidth) {
    kernel.bandwidth = *config.bandwidth;
    kernel_ptr = &kernel;
  }

  EffectReport report;
  report.n = data.n();
  report.simultaneous = config.policy.simultaneous();
  report.log_outcome = config.log_outcome;
  report.conf_level = config.conf_level;
  report.policy = config.policy;

  for (LinkKind link : config.links) {
    for (double tau : config.taus) {
      try {
        const TauFit fit = fit_tau(y, design, tau, link, kernel_ptr);
        report.bandwidth = fit.bandwidth;
        if (!config.policy.simultaneous()) {
          const Vec x0 = data.x.col(0);
          const auto eff = location_scale_effects(fit, design, x0,
                                                  config.policy,
                                                  config.log_outcome);
          const auto comp = influence_rows(y, x0, design, fit, eff,
                                           config.policy, config.inference);
          Vec l1(2), l2(2), lt(2);
          l1 << 1, 0;
          l2 << 0, 1;
          lt << 1, 1;
          const auto ci_l = effect_ci(comp, l1, eff.pi_l, config.conf_level);
          const auto ci_s = effect_ci(comp, l2, eff.pi_s, config.conf_level);
          const auto ci_t = effect_ci(comp, lt, eff.pi_total, config.conf_level);
          const double mu = config.policy.mu;
          report.rows.push_back({tau, link_name(link), "location", eff.pi_l,
                                 ci_l.se, ci_l.lo, ci_l.hi, std::nullopt, mu,
                                 fit.q_hat, fit.f_hat});
          report.rows.push_back({tau, link_name(link), "scale", eff.pi_s,
                                 ci_s.se, ci_s.lo, ci_s.hi, eff.elasticity, mu,
                                 fit.q_hat, fit.f_hat});
          report.rows.push_back({tau, link_name(link), "total", eff.pi_total,
                                 ci_t.se, ci_t.lo, ci_t.hi, std::nullopt, mu,
                                 fit.q_hat, fit.f_hat});
          const auto test = scale_effect_ttest(comp.blocks, config.policy.mu);
          report.scale_tests.push_back({tau, link_name(link), test.gamma_hat,
                                        test.v_hat, test.t_stat, test.p_value});
        } else {
          const auto eff = simultaneous_effects(fit, design, config.policy);
          const auto comp = influence_rows_simultaneous(
              y, design, fit, eff, config.policy, config.inference);
          Vec l1(2), l2(2), lc(2);
          l1 << 1, 0;
          l2 << 0, 1;
          lc << 1, 1;
          const auto ci_1 =
              effect_ci(comp, l1, eff.pi_component[0], config.conf_level);
          const auto ci_2 =
              effect_ci(comp, l2, eff.pi_component[1], config.conf_level);
          const auto ci_c = effect_ci(comp, lc, eff.pi_c, config.conf_level);
          const double mu = 0.0;  // pure location shifts have no pivot
          report.rows.push_back({tau, link_name(link), "location_1",
                                 eff.pi_component[0], ci_1.se, ci_1.lo, ci_1.hi,
                                 std::nullopt, mu, fit.q_hat, fit.f_hat});
          report.rows.push_back({tau, link_name(link), "location_2",
                                 eff.pi_component[1], ci_2.se, ci_2.lo, ci_2.hi,
                                 std::nullopt, mu, fit.q_hat, fit.f_hat});
          report.rows.push_back({tau, link_name(link), "compensated", eff.pi_c,
                                 ci_c.se, ci_c.lo, ci_c.hi, std::nullopt, mu,
                                 fit.q_hat, fit.f_hat});
        }
      } catch (const Error& e) {
        throw Error(e.kind(), "tau=" + fmt_sig9(tau) + ", " +
                                  std::string(link_name(link)) + ": " +
                                  e.what());
      }
    }
  }
  return report;
}

void write_report_csv(const EffectReport& report, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrKind::io_error, "cannot open " + path);
  f << kEffectsCsvHeader << '\n';
  for (const auto& r : report.rows) {
    f << fmt_sig9(r.tau) << ',' << r.link << ',' << r.effect << ','
      << fmt_sig9(r.estimate) << ',' << fmt_sig9(r.se) << ','
      << fmt_sig9(r.ci_lo) << ',' << fmt_sig9(r.ci_hi) << ','
      << (r.elasticity ? fmt_sig9(*r.elasticity) : std::string()) << ','
      << fmt_sig9(r.mu) << ',' << fmt_sig9(r.q_hat) << ',' << fmt_sig9(r.f_hat)
      << '\n';
  }
}

void write_scale_test_csv(const EffectReport& report, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrKind::io_error, "cannot open " + path);
  f << kScaleTestCsvHeader << '\n';
  for (const auto& r : report.scale_tests) {
    f << fmt_sig9(r.tau) << ',' << r.link << ',' << fmt_sig9(r.gamma_hat)
      << ',' << fmt_sig9(r.v_hat) << ',' << fmt_sig9(r.t_stat) << ','
      << fmt_sig9(r.p_value) << '\n';
  }
}

namespace {

json policy_to_json(const PolicySpec& p) {
  json j;
  j["ldot0"] = p.ldot0;
  j["sdot0"] = p.sdot0;
  j["mu"] = p.mu;
  j["ldot_vec"] = p.ldot_vec;
  return j;
}

PolicySpec policy_from_json(const json& j) {
  PolicySpec p;
  p.ldot0 = j.at("ldot0").get<double>();
  p.sdot0 = j.at("sdot0").get<double>();
  p.mu = j.at("mu").get<double>();
  p.ldot_vec = j.at("ldot_vec").get<std::vector<double>>();
  return p;
}

}  // namespace

void write_report_json(const EffectReport& report, const std::string& path) {
  json j;
  j["schema_version"] = report.schema_version;
  j["n"] = report.n;
  j["simultaneous"] = report.simultaneous;
  j["log_outcome"] = report.log_outcome;
  j["conf_level"] = report.conf_level;
  j["bandwidth"] = report.bandwidth;
  j["policy"] = policy_to_json(report.policy);
  j["rows"] = json::array();
  for (const auto& r : report.rows) {
    json row;
    row["tau"] = r.tau;
    row["link"] = r.link;
    row["effect"] = r.effect;
    row["estimate"] = r.estimate;
    row["se"] = r.se;
    row["ci_lo"] = r.ci_lo;
    row["ci_hi"] = r.ci_hi;
    if (r.elasticity) row["elasticity"] = *r.elasticity;
    row["mu"] = r.mu;
    row["q_hat"] = r.q_hat;
    row["f_hat"] = r.f_hat;
    j["rows"].push_back(std::move(row));
  }
  j["scale_tests"] = json::array();
  for (const auto& r : report.scale_tests) {
    json row;
    row["tau"] = r.tau;
    row["link"] = r.link;
    row["gamma_hat"] = r.gamma_hat;
    row["v_hat"] = r.v_hat;
    row["t_stat"] = r.t_stat;
    row["p_value"] = r.p_value;
    j["scale_tests"].push_back(std::move(row));
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrKind::io_error, "cannot open " + path);
  f << j.dump(2) << '\n';
}

EffectReport read_report_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(ErrKind::io_error, "cannot open " + path);
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    fail(ErrKind::parse_error, std::string("bad report json: ") + e.what());
  }
  EffectReport report;
  report.schema_version = j.at("schema_version").get<int>();
  report.n = j.at("n").get<int>();
  report.simultaneous = j.at("simultaneous").get<bool>();
  report.log_outcome = j.at("log_outcome").get<bool>();
  report.conf_level = j.at("conf_level").get<double>();
  report.bandwidth = j.at("bandwidth").get<double>();
  report.policy = policy_from_json(j.at("policy"));
  for (const auto& row : j.at("rows")) {
    EffectRow r;
    r.tau = row.at("tau").get<double>();
    r.link = row.at("link").get<std::string>();
    r.effect = row.at("effect").get<std::string>();
    r.estimate = row.at("estimate").get<double>();
    r.se = row.at("se").get<double>();
    r.ci_lo = row.at("ci_lo").get<double>();
    r.ci_hi = row.at("ci_hi").get<double>();
    if (row.contains("elasticity")) {
      r.elasticity = row.at("elasticity").get<double>();
    }
    r.mu = row.at("mu").get<double>();
    r.q_hat = row.at("q_hat").get<double>();
    r.f_hat = row.at("f_hat").get<double>();
    report.rows.push_back(std::move(r));
  }
  for (const auto& row : j.at("scale_tests")) {
    ScaleTestRow r;
    r.tau = row.at("tau").get<double>();
    r.link = row.at("link").get<std::string>();
    r.gamma_hat = row.at("gamma_hat").get<double>();
    r.v_hat = row.at("v_hat").get<double>();
    r.t_stat = row.at("t_stat").get<double>();
    r.p_value = row.at("p_value").get<double>();
    report.scale_tests.push_back(std::move(r));
  }
  return report;
}

}  // namespace upe
