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

// upe command-line interface. Every computation goes through the C API in
// upe/upe.h; this translation unit only parses flags and config files and
// moves bytes.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "config_ini.hpp"
#include "upe/upe.h"

namespace {

int fail_with(upe_status status) {
  std::fprintf(stderr, "error: %s\n", upe_last_error());
  return static_cast<int>(status);
}

int parse_links(const std::vector<std::string>& names) {
  int mask = 0;
  for (const auto& n : names) {
    if (n == "probit") {
      mask |= UPE_LINK_PROBIT;
    } else if (n == "logit") {
      mask |= UPE_LINK_LOGIT;
    } else {
      throw CLI::ValidationError("--link", "unknown link '" + n + "'");
    }
  }
  return mask;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

struct CommonMcArgs {
  std::string config_path;
  std::string out_dir = "upe_out";
  std::vector<std::string> overrides;
  int workers = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int reps = 0;
  int n = 0;
};

void add_common_mc_flags(CLI::App* cmd, CommonMcArgs& args) {
  cmd->add_option("--config", args.config_path, "INI-style configuration file")
      ->required();
  cmd->add_option("--out", args.out_dir, "output directory");
  cmd->add_option("--workers", args.workers, "worker threads (0 = all cores)");
  cmd->add_option("--seed", args.seed, "random seed")
      ->each([&](const std::string&) { args.seed_set = true; });
  cmd->add_option("--reps", args.reps, "replication count override");
  cmd->add_option("--n", args.n, "sample size override");
  cmd->add_option("--set", args.overrides,
                  "override a config key, e.g. --set mc.reps=500")
      ->take_all();
}

upecli::IniConfig load_config(const CommonMcArgs& args) {
  upecli::IniConfig cfg = upecli::IniConfig::parse_file(args.config_path);
  for (const auto& ov : args.overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("--set expects key=value, got '" + ov + "'");
    }
    cfg.set(ov.substr(0, eq), ov.substr(eq + 1));
  }
  return cfg;
}

struct McSetup {
  upe_mc_config config{};
  std::vector<double> taus;
  std::vector<double> gamma_grid;
};

McSetup build_mc_config(const upecli::IniConfig& cfg, const CommonMcArgs& args,
                        bool needs_gamma) {
  McSetup s;
  s.config.dgp.lambda = cfg.get_double("dgp.lambda", 0.0);
  s.config.dgp.gamma = cfg.get_double("dgp.gamma", 1.0);
  s.config.dgp.mu_x = cfg.get_double("dgp.mu_x", 0.0);
  s.config.dgp.sigma_x = cfg.get_double("dgp.sigma_x", 1.0);
  s.config.dgp.sigma_u = cfg.get_double("dgp.sigma_u", 1.0);

  s.config.policy.ldot0 = cfg.get_double("policy.ldot0", 1.0);
  s.config.policy.sdot0 = cfg.get_double("policy.sdot0", -1.0);
  s.config.policy.mu = cfg.get_double("policy.mu", s.config.dgp.mu_x);

  s.config.n = args.n > 0 ? args.n : static_cast<int>(cfg.get_int("mc.n", 1000));
  s.config.reps =
      args.reps > 0 ? args.reps : static_cast<int>(cfg.get_int("mc.reps", 2000));
  s.taus = cfg.get_double_list("mc.taus", {0.10, 0.25, 0.50, 0.75, 0.90});
  s.config.taus = s.taus.data();
  s.config.n_taus = static_cast<int>(s.taus.size());
  s.config.links = parse_links(
      cfg.get_string_list("mc.links", {"probit", "logit"}));
  s.config.seed = args.seed_set
                      ? args.seed
                      : static_cast<std::uint64_t>(cfg.get_int("mc.seed", 1));
  s.gamma_grid = cfg.get_double_list("mc.gamma_grid", {});
  if (needs_gamma && s.gamma_grid.empty()) {
    throw std::runtime_error("config key mc.gamma_grid is required here");
  }
  if (!s.gamma_grid.empty()) {
    s.config.gamma_grid = s.gamma_grid.data();
    s.config.n_gamma = static_cast<int>(s.gamma_grid.size());
  }
  s.config.workers = args.workers > 0
                         ? args.workers
                         : static_cast<int>(cfg.get_int("mc.workers", 0));
  s.config.conf_level = cfg.get_double("mc.conf_level", 0.95);
  return s;
}

int run_mc_command(upe_mc_mode mode, const CommonMcArgs& args,
                   bool needs_gamma) {
  const upecli::IniConfig cfg = load_config(args);
  McSetup setup = build_mc_config(cfg, args, needs_gamma);

  upe_mc_result* result = nullptr;
  upe_status st = upe_mc_run(mode, &setup.config, &result);
  if (st != UPE_OK) return fail_with(st);
  st = upe_mc_write(result, args.out_dir.c_str());
  upe_mc_result_free(result);
  if (st != UPE_OK) return fail_with(st);
  std::printf("wrote tables to %s\n", args.out_dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"unconditional policy effects on outcome quantiles"};
  app.require_subcommand(1);

  // ------------------------------------------------------------- estimate
  auto* est = app.add_subcommand(
      "estimate", "estimate location/scale or simultaneous effects from a CSV");
  std::string data_path, y_col, x_cols, w_cols, link_csv = "probit";
  std::string tau_csv = "0.1,0.25,0.5,0.75,0.9", out_dir = "upe_out";
  std::string ldot_csv;
  double ldot0 = 1.0, sdot0 = -1.0, mu = 0.0, bandwidth = 0.0, level = 0.95;
  bool simultaneous = false, log_outcome = false, quadratic_x = false;
  bool psi_strict = false;
  est->add_option("--data", data_path, "input CSV file")->required();
  est->add_option("--y", y_col, "outcome column")->required();
  est->add_option("--x", x_cols, "target column(s), comma separated")
      ->required();
  est->add_option("--w", w_cols, "control columns, comma separated");
  est->add_option("--tau", tau_csv, "quantile levels");
  est->add_option("--link", link_csv, "probit, logit, or both");
  est->add_option("--ldot0", ldot0, "location shift derivative at 0");
  est->add_option("--sdot0", sdot0, "scale shift derivative at 0");
  est->add_option("--mu", mu, "pivot of the scale shift");
  est->add_flag("--simultaneous", simultaneous,
                "joint location shifts of two targets");
  est->add_option("--ldot", ldot_csv,
                  "per-target shift derivatives, e.g. 1,-1 (simultaneous)");
  est->add_flag("--log-outcome", log_outcome, "estimate on log(y)");
  est->add_flag("--quadratic-x", quadratic_x, "use (x, x^2) target basis");
  est->add_option("--bandwidth", bandwidth,
                  "kernel bandwidth override (default: Silverman rule)");
  est->add_option("--level", level, "confidence level");
  est->add_flag("--psi-strict", psi_strict,
                "strict indicator 1{y < q} inside the quantile influence");
  est->add_option("--out", out_dir, "output directory");

  // ------------------------------------------------ simulate family
  CommonMcArgs sim_args, pow_args, norm_args;
  auto* sim = app.add_subcommand(
      "simulate", "replicated bias/variance/MSE or coverage tables");
  std::string sim_mode;
  add_common_mc_flags(sim, sim_args);
  sim->add_option("--mode", sim_mode, "bias or coverage (default from config)");

  auto* pow = app.add_subcommand("power",
                                 "size and power of the zero-scale t-test");
  add_common_mc_flags(pow, pow_args);

  auto* norm = app.add_subcommand(
      "normality", "KS/QQ diagnostics of studentized effect estimates");
  add_common_mc_flags(norm, norm_args);

  // ---------------------------------------------------------------- oracle
  auto* orc = app.add_subcommand(
      "oracle", "closed-form vs brute-force effect comparison");
  CommonMcArgs orc_args;
  double orc_delta = 0.01;
  std::int64_t orc_nsim = 4000000;
  int orc_reps = 3;
  orc->add_option("--config", orc_args.config_path, "INI config with [dgp]/[policy]")
      ->required();
  orc->add_option("--delta", orc_delta, "finite-difference step");
  orc->add_option("--nsim", orc_nsim, "simulation draws per replicate");
  orc->add_option("--replicates", orc_reps, "replicate seeds for the MC se");
  orc->add_option("--seed", orc_args.seed, "random seed")
      ->each([&](const std::string&) { orc_args.seed_set = true; });
  orc->add_option("--workers", orc_args.workers, "worker threads");
  orc->add_option("--out", orc_args.out_dir, "output directory");
  orc->add_option("--set", orc_args.overrides, "override a config key")
      ->take_all();

  // ------------------------------------------------------------ synth-data
  auto* synth = app.add_subcommand("synth-data",
                                   "write a synthetic CSV fixture");
  std::string profile = "wage1-like", synth_out = "synth.csv";
  int synth_n = 526;
  std::uint64_t synth_seed = 1;
  synth->add_option("--profile", profile, "wage1-like or mc");
  synth->add_option("--n", synth_n, "row count");
  synth->add_option("--seed", synth_seed, "random seed");
  synth->add_option("--out", synth_out, "output CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }

  try {
    if (est->parsed()) {
      upe_dataset* data = nullptr;
      upe_status st = upe_dataset_read_csv(
          data_path.c_str(), y_col.c_str(), x_cols.c_str(),
          w_cols.empty() ? nullptr : w_cols.c_str(), &data);
      if (st != UPE_OK) return fail_with(st);
      std::printf("loaded %d rows (%d dropped)\n", upe_dataset_rows(data),
                  upe_dataset_dropped_rows(data));
      for (int c = 0; c < upe_dataset_ncols(data); ++c) {
        char colname[64];
        double lo = 0.0, hi = 0.0;
        if (upe_dataset_column_info(data, c, colname, &lo, &hi) == UPE_OK) {
          std::printf("  %-12s range [%g, %g]\n", colname, lo, hi);
        }
      }

      std::vector<double> taus;
      for (const auto& t : split_commas(tau_csv)) taus.push_back(std::stod(t));

      upe_estimate_config cfg{};
      cfg.taus = taus.data();
      cfg.n_taus = static_cast<int>(taus.size());
      cfg.links = parse_links(split_commas(link_csv));
      cfg.quadratic_x = quadratic_x ? 1 : 0;
      cfg.policy.simultaneous = simultaneous ? 1 : 0;
      if (simultaneous) {
        const auto parts = split_commas(ldot_csv);
        if (parts.size() != 2) {
          std::fprintf(stderr,
                       "error: --simultaneous needs --ldot with two values\n");
          upe_dataset_free(data);
          return 2;
        }
        cfg.policy.ldot1 = std::stod(parts[0]);
        cfg.policy.ldot2 = std::stod(parts[1]);
      } else {
        cfg.policy.ldot0 = ldot0;
        cfg.policy.sdot0 = sdot0;
        cfg.policy.mu = mu;
      }
      cfg.bandwidth = bandwidth;
      cfg.log_outcome = log_outcome ? 1 : 0;
      cfg.conf_level = level;
      cfg.psi_strict = psi_strict ? 1 : 0;

      upe_report* report = nullptr;
      st = upe_estimate_run(data, &cfg, &report);
      upe_dataset_free(data);
      if (st != UPE_OK) return fail_with(st);

      std::filesystem::create_directories(out_dir);
      const std::string csv = out_dir + "/effects.csv";
      const std::string tcsv = out_dir + "/scale_test.csv";
      const std::string json = out_dir + "/effects.json";
      st = upe_report_write(report, csv.c_str(),
                            simultaneous ? nullptr : tcsv.c_str(),
                            json.c_str());
      if (st != UPE_OK) {
        upe_report_free(report);
        return fail_with(st);
      }
      const int nrows = upe_report_nrows(report);
      for (int i = 0; i < nrows; ++i) {
        upe_effect_row row;
        if (upe_report_row(report, i, &row) == UPE_OK) {
          std::printf("tau=%.2f %-6s %-11s % .6f (se %.6f)\n", row.tau,
                      row.link, row.effect, row.estimate, row.se);
        }
      }
      upe_report_free(report);
      std::printf("wrote %s\n", csv.c_str());
      return 0;
    }

    if (sim->parsed()) {
      const upecli::IniConfig cfg = load_config(sim_args);
      std::string mode =
          sim_mode.empty() ? cfg.get_string("mc.mode", "bias") : sim_mode;
      if (mode != "bias" && mode != "coverage") {
        std::fprintf(stderr, "error: --mode must be bias or coverage\n");
        return 2;
      }
      return run_mc_command(mode == "bias" ? UPE_MC_BIAS : UPE_MC_COVERAGE,
                            sim_args, mode == "coverage");
    }
    if (pow->parsed()) return run_mc_command(UPE_MC_POWER, pow_args, true);
    if (norm->parsed()) {
      return run_mc_command(UPE_MC_NORMALITY, norm_args, false);
    }

    if (orc->parsed()) {
      const upecli::IniConfig cfg = load_config(orc_args);
      upe_dgp dgp{};
      dgp.lambda = cfg.get_double("dgp.lambda", 0.0);
      dgp.gamma = cfg.get_double("dgp.gamma", 1.0);
      dgp.mu_x = cfg.get_double("dgp.mu_x", 0.0);
      dgp.sigma_x = cfg.get_double("dgp.sigma_x", 1.0);
      dgp.sigma_u = cfg.get_double("dgp.sigma_u", 1.0);
      upe_policy policy{};
      policy.ldot0 = cfg.get_double("policy.ldot0", 1.0);
      policy.sdot0 = cfg.get_double("policy.sdot0", -1.0);
      policy.mu = cfg.get_double("policy.mu", dgp.mu_x);
      const auto taus = cfg.get_double_list(
          "oracle.taus", {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9});
      const double delta = orc->count("--delta")
                               ? orc_delta
                               : cfg.get_double("oracle.delta", orc_delta);
      const std::int64_t nsim =
          orc->count("--nsim") ? orc_nsim : cfg.get_int("oracle.nsim", orc_nsim);
      const int reps = orc->count("--replicates")
                           ? orc_reps
                           : static_cast<int>(
                                 cfg.get_int("oracle.replicates", orc_reps));
      const std::uint64_t seed =
          orc_args.seed_set ? orc_args.seed
                            : static_cast<std::uint64_t>(
                                  cfg.get_int("oracle.seed", 1));

      std::filesystem::create_directories(orc_args.out_dir);
      const std::string path = orc_args.out_dir + "/oracle_table.csv";
      int all_pass = 0;
      const upe_status st = upe_oracle_compare(
          &dgp, &policy, taus.data(), static_cast<int>(taus.size()), delta,
          nsim, reps, seed, orc_args.workers, path.c_str(), &all_pass);
      if (st != UPE_OK) return fail_with(st);
      double residual = 0.0;
      if (upe_stein_check(&dgp, 0.75, 64, &residual) == UPE_OK) {
        std::printf("stein residual at tau=0.75: %.3e\n", residual);
      }
      std::printf("wrote %s (%s)\n", path.c_str(),
                  all_pass ? "all rows pass" : "SOME ROWS FAIL");
      return all_pass ? 0 : 4;
    }

    if (synth->parsed()) {
      const upe_status st = upe_synth_data(profile.c_str(), synth_n,
                                           synth_seed, synth_out.c_str());
      if (st != UPE_OK) return fail_with(st);
      std::printf("wrote %s\n", synth_out.c_str());
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
