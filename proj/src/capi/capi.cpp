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

#include "upe/upe.h"

#include <cstring>
#include <exception>
#include <string>

#include "upe/dataset.hpp"
#include "upe/error.hpp"
#include "upe/mc.hpp"
#include "upe/oracle.hpp"
#include "upe/report.hpp"

namespace {

thread_local std::string g_last_error;

upe_status status_of(const upe::Error& e) {
  return static_cast<upe_status>(static_cast<int>(e.category()));
}

template <typename Fn>
upe_status guarded(Fn&& fn) {
  try {
    fn();
    return UPE_OK;
  } catch (const upe::Error& e) {
    g_last_error = e.what();
    return status_of(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return UPE_ERROR_NUMERIC;
  } catch (...) {
    g_last_error = "unknown error";
    return UPE_ERROR_NUMERIC;
  }
}

void copy_name(char* dst, std::size_t cap, const std::string& src) {
  const std::size_t m = std::min(cap - 1, src.size());
  std::memcpy(dst, src.data(), m);
  dst[m] = '\0';
}

std::vector<std::string> split_names(const char* csv) {
  std::vector<std::string> out;
  if (!csv) return out;
  std::string cur;
  for (const char* p = csv; *p; ++p) {
    if (*p == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (*p != ' ') {
      cur.push_back(*p);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

upe::PolicySpec to_policy(const upe_policy& p) {
  upe::PolicySpec out;
  if (p.simultaneous) {
    out.ldot_vec = {p.ldot1, p.ldot2};
  } else {
    out.ldot0 = p.ldot0;
    out.sdot0 = p.sdot0;
    out.mu = p.mu;
  }
  return out;
}

std::vector<upe::LinkKind> to_links(int mask) {
  std::vector<upe::LinkKind> out;
  if (mask & UPE_LINK_PROBIT) out.push_back(upe::LinkKind::probit);
  if (mask & UPE_LINK_LOGIT) out.push_back(upe::LinkKind::logit);
  if (out.empty()) upe::fail(upe::ErrKind::invalid_config, "no links in mask");
  return out;
}

upe::NormalLinearDgp to_dgp(const upe_dgp& d) {
  return {d.lambda, d.gamma, d.mu_x, d.sigma_x, d.sigma_u};
}

upe::McConfig to_mc_config(const upe_mc_config& c) {
  upe::McConfig cfg;
  cfg.dgp = to_dgp(c.dgp);
  cfg.n = c.n;
  cfg.reps = c.reps;
  if (!c.taus || c.n_taus <= 0) {
    upe::fail(upe::ErrKind::invalid_config, "no taus");
  }
  cfg.taus.assign(c.taus, c.taus + c.n_taus);
  cfg.links = to_links(c.links);
  cfg.policy = to_policy(c.policy);
  cfg.seed = c.seed;
  if (c.gamma_grid && c.n_gamma > 0) {
    cfg.gamma_grid.assign(c.gamma_grid, c.gamma_grid + c.n_gamma);
  }
  cfg.workers = c.workers;
  if (c.conf_level > 0.0) cfg.conf_level = c.conf_level;
  return cfg;
}

}  // namespace

struct upe_dataset {
  upe::Dataset data;
  upe::LoadReport report;
};

struct upe_report {
  upe::EffectReport report;
};

struct upe_mc_result {
  upe::McSummary summary;
};

extern "C" {

const char* upe_last_error(void) { return g_last_error.c_str(); }

const char* upe_version(void) { return "1.0.0"; }

upe_status upe_dataset_read_csv(const char* path, const char* y_col,
                                const char* x_cols, const char* w_cols,
                                upe_dataset** out) {
  return guarded([&] {
    if (!path || !y_col || !x_cols || !out) {
      upe::fail(upe::ErrKind::invalid_config, "null argument");
    }
    upe::CsvSchema schema;
    schema.y = y_col;
    schema.x = split_names(x_cols);
    schema.w = split_names(w_cols);
    auto holder = new upe_dataset();
    try {
      holder->data = upe::ingest_csv(path, schema, &holder->report);
    } catch (...) {
      delete holder;
      throw;
    }
    *out = holder;
  });
}

upe_status upe_dataset_create(const double* y, const double* x, int n_x,
                              const double* w, int n_w, int n_rows,
                              upe_dataset** out) {
  return guarded([&] {
    if (!y || !x || !out || n_rows <= 0 || n_x <= 0 || n_w < 0 ||
        (n_w > 0 && !w)) {
      upe::fail(upe::ErrKind::invalid_config, "bad dataset arguments");
    }
    auto holder = new upe_dataset();
    holder->data.y = Eigen::Map<const upe::Vec>(y, n_rows);
    holder->data.x = Eigen::Map<const upe::Mat>(x, n_rows, n_x);
    holder->data.w = n_w > 0 ? Eigen::Map<const upe::Mat>(w, n_rows, n_w)
                             : upe::Mat(n_rows, 0);
    holder->data.y_name = "y";
    for (int j = 0; j < n_x; ++j) {
      holder->data.x_names.push_back("x" + std::to_string(j + 1));
    }
    for (int j = 0; j < n_w; ++j) {
      holder->data.w_names.push_back("w" + std::to_string(j + 1));
    }
    holder->report.rows_read = static_cast<std::size_t>(n_rows);
    auto add_range = [&](const std::string& name, const upe::Vec& col) {
      holder->report.ranges.push_back(
          {name, col.minCoeff(), col.maxCoeff()});
    };
    add_range(holder->data.y_name, holder->data.y);
    for (int j = 0; j < n_x; ++j) {
      add_range(holder->data.x_names[static_cast<std::size_t>(j)],
                holder->data.x.col(j));
    }
    for (int j = 0; j < n_w; ++j) {
      add_range(holder->data.w_names[static_cast<std::size_t>(j)],
                holder->data.w.col(j));
    }
    *out = holder;
  });
}

int upe_dataset_rows(const upe_dataset* data) {
  return data ? data->data.n() : 0;
}

int upe_dataset_dropped_rows(const upe_dataset* data) {
  return data ? static_cast<int>(data->report.rows_dropped) : 0;
}

int upe_dataset_ncols(const upe_dataset* data) {
  return data ? static_cast<int>(data->report.ranges.size()) : 0;
}

upe_status upe_dataset_column_info(const upe_dataset* data, int index,
                                   char name[64], double* min_value,
                                   double* max_value) {
  return guarded([&] {
    if (!data || index < 0 ||
        index >= static_cast<int>(data->report.ranges.size())) {
      upe::fail(upe::ErrKind::invalid_config, "bad column index");
    }
    const auto& r = data->report.ranges[static_cast<std::size_t>(index)];
    if (name) copy_name(name, 64, r.name);
    if (min_value) *min_value = r.min;
    if (max_value) *max_value = r.max;
  });
}

void upe_dataset_free(upe_dataset* data) { delete data; }

upe_status upe_estimate_run(const upe_dataset* data,
                            const upe_estimate_config* config,
                            upe_report** out) {
  return guarded([&] {
    if (!data || !config || !out || !config->taus || config->n_taus <= 0) {
      upe::fail(upe::ErrKind::invalid_config, "bad estimate arguments");
    }
    upe::RunConfig rc;
    rc.taus.assign(config->taus, config->taus + config->n_taus);
    rc.links = to_links(config->links);
    rc.x_basis =
        config->quadratic_x ? upe::XBasis::quadratic : upe::XBasis::linear;
    rc.policy = to_policy(config->policy);
    if (config->bandwidth > 0.0) rc.bandwidth = config->bandwidth;
    rc.log_outcome = config->log_outcome != 0;
    if (config->conf_level > 0.0) rc.conf_level = config->conf_level;
    rc.inference.psi_strict = config->psi_strict != 0;
    auto holder = new upe_report();
    try {
      holder->report = upe::run_estimate(data->data, rc);
    } catch (...) {
      delete holder;
      throw;
    }
    *out = holder;
  });
}

int upe_report_nrows(const upe_report* report) {
  return report ? static_cast<int>(report->report.rows.size()) : 0;
}

upe_status upe_report_row(const upe_report* report, int index,
                          upe_effect_row* out) {
  return guarded([&] {
    if (!report || !out || index < 0 ||
        index >= static_cast<int>(report->report.rows.size())) {
      upe::fail(upe::ErrKind::invalid_config, "bad row index");
    }
    const auto& r = report->report.rows[static_cast<std::size_t>(index)];
    upe_effect_row row{};
    row.tau = r.tau;
    copy_name(row.link, sizeof(row.link), r.link);
    copy_name(row.effect, sizeof(row.effect), r.effect);
    row.estimate = r.estimate;
    row.se = r.se;
    row.ci_lo = r.ci_lo;
    row.ci_hi = r.ci_hi;
    row.has_elasticity = r.elasticity.has_value() ? 1 : 0;
    row.elasticity = r.elasticity.value_or(0.0);
    row.mu = r.mu;
    row.q_hat = r.q_hat;
    row.f_hat = r.f_hat;
    *out = row;
  });
}

int upe_report_nttests(const upe_report* report) {
  return report ? static_cast<int>(report->report.scale_tests.size()) : 0;
}

upe_status upe_report_ttest(const upe_report* report, int index,
                            upe_ttest_row* out) {
  return guarded([&] {
    if (!report || !out || index < 0 ||
        index >= static_cast<int>(report->report.scale_tests.size())) {
      upe::fail(upe::ErrKind::invalid_config, "bad ttest index");
    }
    const auto& r = report->report.scale_tests[static_cast<std::size_t>(index)];
    upe_ttest_row row{};
    row.tau = r.tau;
    copy_name(row.link, sizeof(row.link), r.link);
    row.gamma_hat = r.gamma_hat;
    row.v_hat = r.v_hat;
    row.t_stat = r.t_stat;
    row.p_value = r.p_value;
    *out = row;
  });
}

upe_status upe_report_write(const upe_report* report, const char* csv_path,
                            const char* ttest_csv_path, const char* json_path) {
  return guarded([&] {
    if (!report) upe::fail(upe::ErrKind::invalid_config, "null report");
    if (csv_path) upe::write_report_csv(report->report, csv_path);
    if (ttest_csv_path) upe::write_scale_test_csv(report->report, ttest_csv_path);
    if (json_path) upe::write_report_json(report->report, json_path);
  });
}

void upe_report_free(upe_report* report) { delete report; }

upe_status upe_mc_run(upe_mc_mode mode, const upe_mc_config* config,
                      upe_mc_result** out) {
  return guarded([&] {
    if (!config || !out) {
      upe::fail(upe::ErrKind::invalid_config, "bad mc arguments");
    }
    const upe::McConfig cfg = to_mc_config(*config);
    auto holder = new upe_mc_result();
    try {
      holder->summary = upe::run_mc(static_cast<upe::McMode>(mode), cfg);
    } catch (...) {
      delete holder;
      throw;
    }
    *out = holder;
  });
}

int upe_mc_ncells(const upe_mc_result* result) {
  return result ? static_cast<int>(result->summary.cells.size()) : 0;
}

upe_status upe_mc_cell_at(const upe_mc_result* result, int index,
                          upe_mc_cell* out) {
  return guarded([&] {
    if (!result || !out || index < 0 ||
        index >= static_cast<int>(result->summary.cells.size())) {
      upe::fail(upe::ErrKind::invalid_config, "bad cell index");
    }
    const auto& c = result->summary.cells[static_cast<std::size_t>(index)];
    upe_mc_cell cell{};
    copy_name(cell.estimator, sizeof(cell.estimator), c.estimator);
    copy_name(cell.link, sizeof(cell.link), c.link);
    cell.tau = c.tau;
    cell.n = c.n;
    cell.gamma = c.gamma;
    copy_name(cell.statistic, sizeof(cell.statistic), c.statistic);
    cell.value = c.value;
    cell.mc_se = c.mc_se;
    *out = cell;
  });
}

upe_status upe_mc_write(const upe_mc_result* result, const char* dir) {
  return guarded([&] {
    if (!result || !dir) upe::fail(upe::ErrKind::invalid_config, "null args");
    upe::write_mc_outputs(result->summary, dir);
  });
}

void upe_mc_result_free(upe_mc_result* result) { delete result; }

upe_status upe_oracle_closed_form(const upe_dgp* dgp, const upe_policy* policy,
                                  double tau, double* pi_l, double* pi_s,
                                  int* has_elasticity, double* elasticity) {
  return guarded([&] {
    if (!dgp || !policy || !pi_l || !pi_s) {
      upe::fail(upe::ErrKind::invalid_config, "null args");
    }
    const auto eff =
        upe::closed_form_effects(to_dgp(*dgp), to_policy(*policy), tau);
    *pi_l = eff.pi_l;
    *pi_s = eff.pi_s;
    if (has_elasticity) *has_elasticity = eff.elasticity.has_value() ? 1 : 0;
    if (elasticity) *elasticity = eff.elasticity.value_or(0.0);
  });
}

upe_status upe_oracle_brute_force(const upe_dgp* dgp, const upe_policy* policy,
                                  double tau, double delta, int64_t n_sim,
                                  uint64_t seed, int workers, double* pi_l,
                                  double* pi_s) {
  return guarded([&] {
    if (!dgp || !policy || !pi_l || !pi_s) {
      upe::fail(upe::ErrKind::invalid_config, "null args");
    }
    const auto r = upe::brute_force_effect(to_dgp(*dgp), to_policy(*policy),
                                           tau, delta, n_sim, seed, workers);
    *pi_l = r.pi_l;
    *pi_s = r.pi_s;
  });
}

upe_status upe_oracle_compare(const upe_dgp* dgp, const upe_policy* policy,
                              const double* taus, int n_taus, double delta,
                              int64_t n_sim, int replicates, uint64_t seed,
                              int workers, const char* csv_path,
                              int* all_pass) {
  return guarded([&] {
    if (!dgp || !policy || !taus || n_taus <= 0) {
      upe::fail(upe::ErrKind::invalid_config, "null args");
    }
    const std::vector<double> tau_list(taus, taus + n_taus);
    const auto rows =
        upe::oracle_compare(to_dgp(*dgp), to_policy(*policy), tau_list, delta,
                            n_sim, replicates, seed, workers);
    bool ok = true;
    for (const auto& r : rows) ok = ok && r.pass;
    if (all_pass) *all_pass = ok ? 1 : 0;
    if (csv_path) upe::write_oracle_csv(rows, csv_path);
  });
}

upe_status upe_stein_check(const upe_dgp* dgp, double tau, int n_nodes,
                           double* residual) {
  return guarded([&] {
    if (!dgp || !residual) upe::fail(upe::ErrKind::invalid_config, "null args");
    *residual = upe::stein_check(to_dgp(*dgp), tau, n_nodes);
  });
}

upe_status upe_synth_data(const char* profile, int n, uint64_t seed,
                          const char* path) {
  return guarded([&] {
    if (!profile || !path) upe::fail(upe::ErrKind::invalid_config, "null args");
    upe::write_synth_csv(profile, n, seed, path);
  });
}

}  // extern "C"
