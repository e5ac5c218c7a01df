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

#include "upe/mc.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <thread>

#include "upe/error.hpp"
#include "upe/quantile.hpp"
#include "upe/rng.hpp"
#include "upe/textio.hpp"

namespace upe {

namespace {

constexpr double kZ975 = 1.9599639845400545;

int effective_workers(int workers, int reps) {
  int w = workers > 0 ? workers
                      : static_cast<int>(std::thread::hardware_concurrency());
  w = std::max(1, w);
  return std::min(w, std::max(1, reps));
}

// Runs per_rep(r) for r in [0, reps) on a worker pool. Results land in
// replication-indexed slots and all later reductions walk them in order, so
// the summary does not depend on the worker count. Estimator failures leave
// an empty slot.
template <typename Result>
std::vector<std::optional<Result>> parallel_reps(
    int reps, int workers, const std::function<Result(int)>& per_rep) {
  std::vector<std::optional<Result>> slots(static_cast<std::size_t>(reps));
  const int nthreads = effective_workers(workers, reps);
  std::atomic<int> next{0};
  auto work = [&]() {
    for (;;) {
      const int r = next.fetch_add(1);
      if (r >= reps) return;
      try {
        slots[static_cast<std::size_t>(r)] = per_rep(r);
      } catch (const Error&) {
        // dropped replication; counted by the caller
      }
    }
  };
  if (nthreads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nthreads));
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  return slots;
}

struct Moments {
  double mean = 0.0, var = 0.0, m4 = 0.0;
  std::size_t count = 0;

  static Moments of(const std::vector<double>& v) {
    Moments m;
    m.count = v.size();
    if (v.empty()) return m;
    for (double a : v) m.mean += a;
    m.mean /= static_cast<double>(v.size());
    for (double a : v) {
      const double d = a - m.mean;
      m.var += d * d;
      m.m4 += d * d * d * d;
    }
    m.var /= static_cast<double>(v.size());
    m.m4 /= static_cast<double>(v.size());
    return m;
  }

  double se_of_mean() const {
    if (count < 2) return 0.0;
    return std::sqrt(var / static_cast<double>(count - 1));
  }
  double se_of_var() const {
    if (count < 2) return 0.0;
    const double v = std::max(0.0, m4 - var * var);
    return std::sqrt(v / static_cast<double>(count));
  }
};

double proportion_se(double p, std::size_t m) {
  if (m == 0) return 0.0;
  return std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(m));
}

void draw_sample(const McConfig& cfg, double gamma, int rep, Vec& x, Vec& y) {
  const auto n = static_cast<std::size_t>(cfg.n);
  x.resize(cfg.n);
  y.resize(cfg.n);
  rng_fill_normal(cfg.seed, static_cast<std::uint64_t>(rep), 0, n, x.data());
  rng_fill_normal(cfg.seed, static_cast<std::uint64_t>(rep), 1, n, y.data());
  for (int i = 0; i < cfg.n; ++i) {
    x[i] = cfg.dgp.mu_x + cfg.dgp.sigma_x * x[i];
    y[i] = cfg.dgp.lambda + gamma * x[i] + cfg.dgp.sigma_u * y[i];
  }
}

struct CellDraws {
  // one vector of per-replication values for each (link, tau) pair
  std::vector<std::vector<double>> values;
};

double kolmogorov_q(double lambda) {
  if (lambda < 0.18) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 128; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += sign * term;
    if (term < 1e-16) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace

const char* mc_mode_name(McMode mode) {
  switch (mode) {
    case McMode::bias: return "bias";
    case McMode::coverage: return "coverage";
    case McMode::power: return "power";
    case McMode::normality: return "normality";
  }
  return "unknown";
}

void McConfig::validate(McMode mode) const {
  dgp.validate();
  if (n < 30) fail(ErrKind::invalid_config, "mc sample size below 30");
  if (reps < 1) fail(ErrKind::invalid_config, "reps must be >= 1");
  if (mode == McMode::normality && reps < 2) {
    fail(ErrKind::minimum_reps, "normality diagnostics need reps >= 2");
  }
  if (taus.empty()) fail(ErrKind::invalid_config, "no quantile levels");
  for (double t : taus) {
    if (!(t > 0.0 && t < 1.0)) {
      fail(ErrKind::invalid_config, "tau outside (0,1)");
    }
  }
  if (links.empty()) fail(ErrKind::invalid_config, "no links selected");
  if (!(conf_level > 0.0 && conf_level < 1.0)) {
    fail(ErrKind::invalid_config, "confidence level outside (0,1)");
  }
  if ((mode == McMode::coverage || mode == McMode::power) &&
      gamma_grid.empty()) {
    fail(ErrKind::invalid_config, "mode requires a gamma grid");
  }
  if (mode != McMode::power &&
      std::fabs(policy.mu - dgp.mu_x) > 1e-9 * std::max(1.0, std::fabs(dgp.mu_x))) {
    fail(ErrKind::pivot_mismatch,
         "truth-based tables need the pivot at mu_x");
  }
  PolicySpec check = policy;
  check.validate(1);
}

McSummary run_bias_table(const McConfig& cfg) {
  cfg.validate(McMode::bias);
  McSummary out;
  out.mode = McMode::bias;
  out.n = cfg.n;
  out.reps = cfg.reps;
  out.seed = cfg.seed;

  const std::size_t ncells = cfg.links.size() * cfg.taus.size();
  using RepResult = std::vector<std::optional<Eigen::Vector2d>>;
  const BasisSpec basis{{XBasis::linear}};

  std::function<RepResult(int)> body = [&](int rep) {
    Vec x, y;
    draw_sample(cfg, cfg.dgp.gamma, rep, x, y);
    Mat xm = x;
    Mat wm(cfg.n, 0);
    const Design design = build_design(xm, wm, basis);
    RepResult res(ncells);
    std::size_t c = 0;
    for (LinkKind link : cfg.links) {
      for (double tau : cfg.taus) {
        try {
          const TauFit fit = fit_tau(y, design, tau, link);
          const auto eff = location_scale_effects(fit, design, x, cfg.policy);
          res[c] = Eigen::Vector2d(eff.pi_l, eff.pi_s);
        } catch (const Error&) {
          // cell-level failure, slot stays empty
        }
        ++c;
      }
    }
    return res;
  };
  const auto slots = parallel_reps<RepResult>(cfg.reps, cfg.workers, body);

  std::size_t c = 0;
  for (LinkKind link : cfg.links) {
    for (double tau : cfg.taus) {
      const auto truth = closed_form_effects(cfg.dgp, cfg.policy, tau);
      std::vector<double> el, es;
      std::size_t failed = 0;
      for (const auto& slot : slots) {
        if (!slot || !(*slot)[c]) {
          ++failed;
          continue;
        }
        el.push_back((*(*slot)[c])[0]);
        es.push_back((*(*slot)[c])[1]);
      }
      const double fail_rate =
          static_cast<double>(failed) / static_cast<double>(cfg.reps);
      for (int which = 0; which < 2; ++which) {
        const auto& v = which == 0 ? el : es;
        const double t = which == 0 ? truth.pi_l : truth.pi_s;
        const char* est = which == 0 ? "location" : "scale";
        const Moments m = Moments::of(v);
        std::vector<double> sq(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
          sq[i] = (v[i] - t) * (v[i] - t);
        }
        const Moments msq = Moments::of(sq);
        out.cells.push_back({est, link_name(link), tau, cfg.n, cfg.dgp.gamma,
                             "bias", m.mean - t, m.se_of_mean()});
        out.cells.push_back({est, link_name(link), tau, cfg.n, cfg.dgp.gamma,
                             "variance", m.var, m.se_of_var()});
        out.cells.push_back({est, link_name(link), tau, cfg.n, cfg.dgp.gamma,
                             "mse", msq.mean, msq.se_of_mean()});
      }
      out.cells.push_back({"estimation", link_name(link), tau, cfg.n,
                           cfg.dgp.gamma, "failure_rate", fail_rate,
                           proportion_se(fail_rate, slots.size())});
      ++c;
    }
  }
  return out;
}

McSummary run_coverage_table(const McConfig& cfg) {
  cfg.validate(McMode::coverage);
  McSummary out;
  out.mode = McMode::coverage;
  out.n = cfg.n;
  out.reps = cfg.reps;
  out.seed = cfg.seed;

  const std::size_t ncells = cfg.links.size() * cfg.taus.size();
  using RepResult = std::vector<std::optional<Eigen::Vector2d>>;
  const BasisSpec basis{{XBasis::linear}};

  for (double gamma : cfg.gamma_grid) {
    NormalLinearDgp dgp = cfg.dgp;
    dgp.gamma = gamma;
    std::function<RepResult(int)> body = [&](int rep) {
      Vec x, y;
      draw_sample(cfg, gamma, rep, x, y);
      Mat xm = x;
      Mat wm(cfg.n, 0);
      const Design design = build_design(xm, wm, basis);
      RepResult res(ncells);
      std::size_t c = 0;
      for (LinkKind link : cfg.links) {
        for (double tau : cfg.taus) {
          try {
            const auto truth = closed_form_effects(dgp, cfg.policy, tau);
            const TauFit fit = fit_tau(y, design, tau, link);
            const auto eff =
                location_scale_effects(fit, design, x, cfg.policy);
            const auto comp = influence_rows(y, x, design, fit, eff,
                                             cfg.policy, cfg.inference);
            Vec l1(2), l2(2);
            l1 << 1, 0;
            l2 << 0, 1;
            const auto ci_l = effect_ci(comp, l1, eff.pi_l, cfg.conf_level);
            const auto ci_s = effect_ci(comp, l2, eff.pi_s, cfg.conf_level);
            res[c] = Eigen::Vector2d(
                ci_l.lo <= truth.pi_l && truth.pi_l <= ci_l.hi ? 1.0 : 0.0,
                ci_s.lo <= truth.pi_s && truth.pi_s <= ci_s.hi ? 1.0 : 0.0);
          } catch (const Error&) {
          }
          ++c;
        }
      }
      return res;
    };
    const auto slots = parallel_reps<RepResult>(cfg.reps, cfg.workers, body);

    std::size_t c = 0;
    for (LinkKind link : cfg.links) {
      for (double tau : cfg.taus) {
        std::vector<double> cov_l, cov_s;
        std::size_t failed = 0;
        for (const auto& slot : slots) {
          if (!slot || !(*slot)[c]) {
            ++failed;
            continue;
          }
          cov_l.push_back((*(*slot)[c])[0]);
          cov_s.push_back((*(*slot)[c])[1]);
        }
        const double fail_rate =
            static_cast<double>(failed) / static_cast<double>(cfg.reps);
        const Moments ml = Moments::of(cov_l);
        const Moments ms = Moments::of(cov_s);
        out.cells.push_back({"location", link_name(link), tau, cfg.n, gamma,
                             "coverage", ml.mean,
                             proportion_se(ml.mean, ml.count)});
        out.cells.push_back({"scale", link_name(link), tau, cfg.n, gamma,
                             "coverage", ms.mean,
                             proportion_se(ms.mean, ms.count)});
        out.cells.push_back({"estimation", link_name(link), tau, cfg.n, gamma,
                             "failure_rate", fail_rate,
                             proportion_se(fail_rate, slots.size())});
        ++c;
      }
    }
  }
  return out;
}

McSummary run_power_curve(const McConfig& cfg) {
  cfg.validate(McMode::power);
  McSummary out;
  out.mode = McMode::power;
  out.n = cfg.n;
  out.reps = cfg.reps;
  out.seed = cfg.seed;

  // The empirical 5% critical value comes from the null (gamma = 0) draws,
  // so the null runs first whatever the grid order.
  std::vector<double> grid = cfg.gamma_grid;
  if (std::find(grid.begin(), grid.end(), 0.0) == grid.end()) {
    grid.insert(grid.begin(), 0.0);
  }
  std::stable_partition(grid.begin(), grid.end(),
                        [](double g) { return g == 0.0; });

  const std::size_t ncells = cfg.links.size() * cfg.taus.size();
  using RepResult = std::vector<std::optional<double>>;
  const BasisSpec basis{{XBasis::linear}};

  // critical values per (link, tau) from the null
  std::vector<double> crit(ncells, kZ975);
  std::vector<PowerSeries> series(ncells);
  {
    std::size_t c = 0;
    for (LinkKind link : cfg.links) {
      for (double tau : cfg.taus) {
        series[c].link = link_name(link);
        series[c].tau = tau;
        ++c;
      }
    }
  }

  for (double gamma : grid) {
    std::function<RepResult(int)> body = [&](int rep) {
      Vec x, y;
      draw_sample(cfg, gamma, rep, x, y);
      Mat xm = x;
      Mat wm(cfg.n, 0);
      const Design design = build_design(xm, wm, basis);
      RepResult res(ncells);
      std::size_t c = 0;
      for (LinkKind link : cfg.links) {
        for (double tau : cfg.taus) {
          try {
            const TauFit fit = fit_tau(y, design, tau, link);
            const auto blocks =
                build_inference_blocks(y, x, design, fit, cfg.inference);
            res[c] = scale_effect_ttest(blocks, cfg.policy.mu).t_stat;
          } catch (const Error&) {
          }
          ++c;
        }
      }
      return res;
    };
    const auto slots = parallel_reps<RepResult>(cfg.reps, cfg.workers, body);

    std::size_t c = 0;
    for (LinkKind link : cfg.links) {
      for (double tau : cfg.taus) {
        std::vector<double> abs_t;
        std::size_t failed = 0;
        for (const auto& slot : slots) {
          if (!slot || !(*slot)[c]) {
            ++failed;
            continue;
          }
          abs_t.push_back(std::fabs(*(*slot)[c]));
        }
        if (gamma == 0.0 && !abs_t.empty()) {
          crit[c] = sample_quantile(abs_t, 0.95);
        }
        double raw = 0.0, adj = 0.0;
        for (double t : abs_t) {
          raw += t > kZ975 ? 1.0 : 0.0;
          adj += t > crit[c] ? 1.0 : 0.0;
        }
        const auto m = abs_t.size();
        raw = m ? raw / static_cast<double>(m) : 0.0;
        adj = m ? adj / static_cast<double>(m) : 0.0;
        const double fail_rate =
            static_cast<double>(failed) / static_cast<double>(cfg.reps);
        out.cells.push_back({"scale_ttest", link_name(link), tau, cfg.n, gamma,
                             "reject_raw", raw, proportion_se(raw, m)});
        out.cells.push_back({"scale_ttest", link_name(link), tau, cfg.n, gamma,
                             "reject_size_adj", adj, proportion_se(adj, m)});
        out.cells.push_back({"estimation", link_name(link), tau, cfg.n, gamma,
                             "failure_rate", fail_rate,
                             proportion_se(fail_rate, slots.size())});
        series[c].gamma.push_back(gamma);
        series[c].reject_raw.push_back(raw);
        series[c].reject_adj.push_back(adj);
        series[c].mc_se_raw.push_back(proportion_se(raw, m));
        series[c].mc_se_adj.push_back(proportion_se(adj, m));
        ++c;
      }
    }
  }
  for (auto& ps : series) {
    std::vector<std::size_t> idx(ps.gamma.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return ps.gamma[a] < ps.gamma[b]; });
    PowerSeries sorted;
    sorted.link = ps.link;
    sorted.tau = ps.tau;
    for (std::size_t i : idx) {
      sorted.gamma.push_back(ps.gamma[i]);
      sorted.reject_raw.push_back(ps.reject_raw[i]);
      sorted.reject_adj.push_back(ps.reject_adj[i]);
      sorted.mc_se_raw.push_back(ps.mc_se_raw[i]);
      sorted.mc_se_adj.push_back(ps.mc_se_adj[i]);
    }
    ps = std::move(sorted);
  }
  out.power_series = std::move(series);
  return out;
}

McSummary run_normality_diag(const McConfig& cfg) {
  cfg.validate(McMode::normality);
  McSummary out;
  out.mode = McMode::normality;
  out.n = cfg.n;
  out.reps = cfg.reps;
  out.seed = cfg.seed;

  std::vector<double> grid =
      cfg.gamma_grid.empty() ? std::vector<double>{cfg.dgp.gamma}
                             : cfg.gamma_grid;
  const std::size_t ncells = cfg.links.size() * cfg.taus.size();
  using RepResult = std::vector<std::optional<Eigen::Vector2d>>;
  const BasisSpec basis{{XBasis::linear}};

  for (double gamma : grid) {
    NormalLinearDgp dgp = cfg.dgp;
    dgp.gamma = gamma;
    std::function<RepResult(int)> body = [&](int rep) {
      Vec x, y;
      draw_sample(cfg, gamma, rep, x, y);
      Mat xm = x;
      Mat wm(cfg.n, 0);
      const Design design = build_design(xm, wm, basis);
      RepResult res(ncells);
      std::size_t c = 0;
      for (LinkKind link : cfg.links) {
        for (double tau : cfg.taus) {
          try {
            const auto truth = closed_form_effects(dgp, cfg.policy, tau);
            const TauFit fit = fit_tau(y, design, tau, link);
            const auto eff =
                location_scale_effects(fit, design, x, cfg.policy);
            const auto comp = influence_rows(y, x, design, fit, eff,
                                             cfg.policy, cfg.inference);
            Vec l1(2), l2(2);
            l1 << 1, 0;
            l2 << 0, 1;
            const auto ci_l = effect_ci(comp, l1, eff.pi_l, cfg.conf_level);
            const auto ci_s = effect_ci(comp, l2, eff.pi_s, cfg.conf_level);
            res[c] = Eigen::Vector2d((eff.pi_l - truth.pi_l) / ci_l.se,
                                     (eff.pi_s - truth.pi_s) / ci_s.se);
          } catch (const Error&) {
          }
          ++c;
        }
      }
      return res;
    };
    const auto slots = parallel_reps<RepResult>(cfg.reps, cfg.workers, body);

    std::size_t c = 0;
    for (LinkKind link : cfg.links) {
      for (double tau : cfg.taus) {
        std::vector<double> zl, zs;
        std::size_t failed = 0;
        for (const auto& slot : slots) {
          if (!slot || !(*slot)[c]) {
            ++failed;
            continue;
          }
          zl.push_back((*(*slot)[c])[0]);
          zs.push_back((*(*slot)[c])[1]);
        }
        const double fail_rate =
            static_cast<double>(failed) / static_cast<double>(cfg.reps);
        for (int which = 0; which < 2; ++which) {
          const auto& z = which == 0 ? zl : zs;
          const char* est = which == 0 ? "location" : "scale";
          const auto [dist, pval] = ks_normal_test(z);
          // null sd of the KS distance, from the Kolmogorov distribution
          const double ks_se =
              z.empty() ? 0.0 : 0.2603 / std::sqrt(static_cast<double>(z.size()));
          out.cells.push_back({est, link_name(link), tau, cfg.n, gamma,
                               "ks_stat", dist, ks_se});
          out.cells.push_back({est, link_name(link), tau, cfg.n, gamma,
                               "ks_pvalue", pval, 0.0});

          QqSeries qq;
          qq.estimator = est;
          qq.link = link_name(link);
          qq.tau = tau;
          qq.gamma = gamma;
          std::vector<double> sorted = z;
          std::sort(sorted.begin(), sorted.end());
          const auto m = sorted.size();
          qq.theoretical.resize(m);
          qq.empirical = sorted;
          for (std::size_t i = 0; i < m; ++i) {
            qq.theoretical[i] = normal_quantile(
                (static_cast<double>(i) + 0.5) / static_cast<double>(m));
          }
          out.qq_series.push_back(std::move(qq));
        }
        out.cells.push_back({"estimation", link_name(link), tau, cfg.n, gamma,
                             "failure_rate", fail_rate,
                             proportion_se(fail_rate, slots.size())});
        ++c;
      }
    }
  }
  return out;
}

McSummary run_mc(McMode mode, const McConfig& config) {
  switch (mode) {
    case McMode::bias: return run_bias_table(config);
    case McMode::coverage: return run_coverage_table(config);
    case McMode::power: return run_power_curve(config);
    case McMode::normality: return run_normality_diag(config);
  }
  fail(ErrKind::invalid_config, "unknown mc mode");
}

std::pair<double, double> ks_normal_test(std::vector<double> draws) {
  if (draws.size() < 2) {
    fail(ErrKind::minimum_reps, "KS test needs at least two draws");
  }
  std::sort(draws.begin(), draws.end());
  const auto m = static_cast<double>(draws.size());
  double dist = 0.0;
  for (std::size_t i = 0; i < draws.size(); ++i) {
    const double cdf = normal_cdf(draws[i]);
    const double hi = (static_cast<double>(i) + 1.0) / m - cdf;
    const double lo = cdf - static_cast<double>(i) / m;
    dist = std::max(dist, std::max(hi, lo));
  }
  const double lambda = (std::sqrt(m) + 0.12 + 0.11 / std::sqrt(m)) * dist;
  return {dist, kolmogorov_q(lambda)};
}

namespace {

void write_table(const McSummary& s, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrKind::io_error, "cannot open " + path);
  f << "estimator,link,tau,n,gamma,statistic,value,mc_se\n";
  for (const auto& c : s.cells) {
    f << c.estimator << ',' << c.link << ',' << fmt_sig9(c.tau) << ',' << c.n
      << ',' << fmt_sig9(c.gamma) << ',' << c.statistic << ','
      << fmt_sig9(c.value) << ',' << fmt_sig9(c.mc_se) << '\n';
  }
}

}  // namespace

void write_mc_outputs(const McSummary& s, const std::string& dir) {
  std::filesystem::create_directories(dir);
  write_table(s, dir + "/" + std::string(mc_mode_name(s.mode)) + "_table.csv");

  for (const auto& ps : s.power_series) {
    const std::string path =
        dir + "/power_" + ps.link + "_tau" + fmt_label2(ps.tau) + ".csv";
    std::ofstream f(path, std::ios::binary);
    if (!f) fail(ErrKind::io_error, "cannot open " + path);
    f << "gamma,reject_raw,reject_size_adj,mc_se_raw,mc_se_adj\n";
    for (std::size_t i = 0; i < ps.gamma.size(); ++i) {
      f << fmt_sig9(ps.gamma[i]) << ',' << fmt_sig9(ps.reject_raw[i]) << ','
        << fmt_sig9(ps.reject_adj[i]) << ',' << fmt_sig9(ps.mc_se_raw[i])
        << ',' << fmt_sig9(ps.mc_se_adj[i]) << '\n';
    }
  }

  for (const auto& qq : s.qq_series) {
    const std::string stem =
        qq.estimator + "_" + qq.link + "_tau" + fmt_label2(qq.tau) + "_g" +
        fmt_label2(qq.gamma) + ".csv";
    {
      const std::string path = dir + "/qq_" + stem;
      std::ofstream f(path, std::ios::binary);
      if (!f) fail(ErrKind::io_error, "cannot open " + path);
      f << "theoretical,empirical\n";
      for (std::size_t i = 0; i < qq.theoretical.size(); ++i) {
        f << fmt_sig9(qq.theoretical[i]) << ',' << fmt_sig9(qq.empirical[i])
          << '\n';
      }
    }
    {
      // density histogram of the studentized draws on a fixed [-5,5] grid
      const std::string path = dir + "/hist_" + stem;
      std::ofstream f(path, std::ios::binary);
      if (!f) fail(ErrKind::io_error, "cannot open " + path);
      f << "bin_lo,bin_hi,density\n";
      constexpr int kBins = 40;
      const double lo = -5.0, width = 10.0 / kBins;
      std::array<std::size_t, kBins> counts{};
      for (double z : qq.empirical) {
        const int b = static_cast<int>((z - lo) / width);
        if (b >= 0 && b < kBins) ++counts[static_cast<std::size_t>(b)];
      }
      const double denom = width * static_cast<double>(qq.empirical.size());
      for (int b = 0; b < kBins; ++b) {
        f << fmt_sig9(lo + b * width) << ',' << fmt_sig9(lo + (b + 1) * width)
          << ',' << fmt_sig9(static_cast<double>(counts[static_cast<std::size_t>(b)]) / denom)
          << '\n';
      }
    }
  }
}

}  // namespace upe
