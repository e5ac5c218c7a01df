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

// End-to-end tests of the installed command surface; each case drives the
// real binary through std::system.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifndef UPE_CLI_PATH
#error "UPE_CLI_PATH must point at the upe binary"
#endif

namespace {

namespace fs = std::filesystem;

fs::path tmp_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("upe_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run(const std::string& args) {
  const std::string cmd =
      std::string(UPE_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_sim_config(const fs::path& path, const std::string& extra) {
  std::ofstream f(path);
  f << "[dgp]\nlambda = 0\ngamma = 1\nmu_x = 0\nsigma_x = 1\nsigma_u = 1\n"
       "[policy]\nldot0 = 1\nsdot0 = -1\nmu = 0\n"
       "[mc]\nn = 200\nreps = 60\ntaus = 0.5\nlinks = probit\nseed = 3\n"
    << extra;
}

}  // namespace

TEST_CASE("estimate workflow: synth data in, tables out, deterministic") {
  const auto dir = tmp_dir("estimate");
  const auto csv = dir / "data.csv";
  CHECK(run("synth-data --profile mc --n 2000 --seed 9 --out " + csv.string()) ==
        0);
  REQUIRE(fs::exists(csv));

  const std::string est = "estimate --data " + csv.string() +
                          " --y y --x x --tau 0.25,0.5 --link probit"
                          " --ldot0 1 --sdot0 -1 --mu 0 --out ";
  CHECK(run(est + (dir / "out1").string()) == 0);
  CHECK(run(est + (dir / "out2").string()) == 0);
  REQUIRE(fs::exists(dir / "out1" / "effects.csv"));
  REQUIRE(fs::exists(dir / "out1" / "effects.json"));
  REQUIRE(fs::exists(dir / "out1" / "scale_test.csv"));
  CHECK(slurp(dir / "out1" / "effects.csv") ==
        slurp(dir / "out2" / "effects.csv"));
  CHECK(slurp(dir / "out1" / "effects.json") ==
        slurp(dir / "out2" / "effects.json"));
}

TEST_CASE("wage1-like workflow with controls and log outcome off") {
  const auto dir = tmp_dir("wage");
  const auto csv = dir / "wage.csv";
  CHECK(run("synth-data --profile wage1-like --n 526 --seed 4 --out " +
            csv.string()) == 0);
  CHECK(run("estimate --data " + csv.string() +
            " --y lwage --x educ --w exper,tenure,nonwhite,female"
            " --tau 0.1,0.5,0.9 --link probit,logit --ldot0 1 --sdot0 -1"
            " --mu 12.29 --out " + (dir / "out").string()) == 0);
  const std::string table = slurp(dir / "out" / "effects.csv");
  CHECK(table.find("12.29") != std::string::npos);  // pivot echoed per row
}

TEST_CASE("exit codes by failure class") {
  const auto dir = tmp_dir("codes");
  const auto csv = dir / "data.csv";
  CHECK(run("synth-data --profile mc --n 500 --seed 10 --out " + csv.string()) ==
        0);
  // config error: unknown link
  CHECK(run("estimate --data " + csv.string() +
            " --y y --x x --link banana --out " + (dir / "o").string()) == 2);
  // data error: missing column
  CHECK(run("estimate --data " + csv.string() + " --y y --x educ --out " +
            (dir / "o").string()) == 3);
  // numerical failure: extreme quantile degenerates the indicator
  CHECK(run("estimate --data " + csv.string() +
            " --y y --x x --tau 0.999 --out " + (dir / "o").string()) == 4);
  // config error: unknown subcommand flag style
  CHECK(run("simulate --config " + (dir / "missing.ini").string()) == 2);
}

TEST_CASE("simulate reruns byte-identically across worker counts") {
  const auto dir = tmp_dir("simdet");
  write_sim_config(dir / "sim.ini", "");
  CHECK(run("simulate --config " + (dir / "sim.ini").string() +
            " --workers 1 --out " + (dir / "w1").string()) == 0);
  CHECK(run("simulate --config " + (dir / "sim.ini").string() +
            " --workers 4 --out " + (dir / "w4").string()) == 0);
  CHECK(slurp(dir / "w1" / "bias_table.csv") ==
        slurp(dir / "w4" / "bias_table.csv"));
}

TEST_CASE("coverage, power and normality subcommands emit their tables") {
  const auto dir = tmp_dir("modes");
  write_sim_config(dir / "sim.ini", "gamma_grid = 0.5, 1\n");
  CHECK(run("simulate --mode coverage --config " + (dir / "sim.ini").string() +
            " --out " + (dir / "cov").string()) == 0);
  CHECK(fs::exists(dir / "cov" / "coverage_table.csv"));

  write_sim_config(dir / "pow.ini",
                   "gamma_grid = -0.3:0.3:0.3\n");
  // power study pivot: mean-one covariate, multiplicative shift at zero
  CHECK(run("power --config " + (dir / "pow.ini").string() +
            " --set dgp.gamma=0 --set dgp.mu_x=1 --set policy.mu=0 --out " +
            (dir / "pow").string()) == 0);
  CHECK(fs::exists(dir / "pow" / "power_table.csv"));
  CHECK(fs::exists(dir / "pow" / "power_probit_tau0.50.csv"));

  write_sim_config(dir / "norm.ini", "reps = 80\n");
  CHECK(run("normality --config " + (dir / "norm.ini").string() + " --out " +
            (dir / "norm").string()) == 0);
  CHECK(fs::exists(dir / "norm" / "normality_table.csv"));
  const std::string norm_table = slurp(dir / "norm" / "normality_table.csv");
  CHECK(norm_table.find("ks_pvalue") != std::string::npos);
  CHECK(fs::exists(dir / "norm" / "qq_location_probit_tau0.50_g1.00.csv"));
  CHECK(fs::exists(dir / "norm" / "hist_scale_probit_tau0.50_g1.00.csv"));
}

TEST_CASE("estimates from a large synthetic sample match the closed form") {
  // y = x + noise: location effect 1 and scale effect -sqrt(0.5) z_tau at
  // every quantile; each estimate must land within 3 standard errors.
  const auto dir = tmp_dir("bigcheck");
  const auto csv = dir / "big.csv";
  CHECK(run("synth-data --profile mc --n 100000 --seed 20 --out " +
            csv.string()) == 0);
  CHECK(run("estimate --data " + csv.string() +
            " --y y --x x --tau 0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9"
            " --link probit --ldot0 1 --sdot0 -1 --mu 0 --out " +
            (dir / "out").string()) == 0);

  const double z[9] = {-1.2815515655, -0.8416212336, -0.5244005127,
                       -0.2533471031, 0.0,           0.2533471031,
                       0.5244005127,  0.8416212336,  1.2815515655};
  std::ifstream f(dir / "out" / "effects.csv");
  std::string line;
  std::getline(f, line);  // header
  int checked = 0;
  while (std::getline(f, line)) {
    std::stringstream ss(line);
    std::string tau_s, link, effect, est_s, se_s;
    std::getline(ss, tau_s, ',');
    std::getline(ss, link, ',');
    std::getline(ss, effect, ',');
    std::getline(ss, est_s, ',');
    std::getline(ss, se_s, ',');
    const double tau = std::stod(tau_s);
    const double est = std::stod(est_s);
    const double se = std::stod(se_s);
    const int k = static_cast<int>(std::lround(tau * 10.0)) - 1;
    REQUIRE(k >= 0);
    REQUIRE(k < 9);
    double truth = 0.0;
    if (effect == "location") {
      truth = 1.0;
    } else if (effect == "scale") {
      truth = -std::sqrt(0.5) * z[k];  // sdot(0) = -1 flips the sign
    } else {
      continue;
    }
    INFO("tau=", tau, " effect=", effect, " est=", est, " truth=", truth,
         " se=", se);
    CHECK(std::fabs(est - truth) <= 3.0 * se);
    ++checked;
  }
  CHECK(checked == 18);
}

TEST_CASE("oracle subcommand") {
  const auto dir = tmp_dir("oracle");
  write_sim_config(dir / "dgp.ini", "[oracle]\ntaus = 0.25, 0.5, 0.75\n");
  CHECK(run("oracle --config " + (dir / "dgp.ini").string() +
            " --nsim 300000 --replicates 4 --seed 12 --out " +
            (dir / "orc").string()) == 0);
  const std::string table = slurp(dir / "orc" / "oracle_table.csv");
  CHECK(table.find("tau,channel") == 0);
  CHECK(table.find(",0\n") == std::string::npos);  // no failing rows
}
