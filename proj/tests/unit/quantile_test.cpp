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

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "upe/error.hpp"
#include "upe/quantile.hpp"
#include "upe/rng.hpp"

using namespace upe;

TEST_CASE("sample_quantile basic order statistics") {
  std::vector<double> y{1, 2, 3, 4, 5};
  CHECK(sample_quantile(y, 0.5) == 3.0);

  std::vector<double> c{2, 2, 2};
  CHECK(sample_quantile(c, 0.9) == 2.0);

  // uniform grid on [0,1]: quantile matches the population value
  std::vector<double> grid(10001);
  for (int i = 0; i <= 10000; ++i) grid[i] = i / 10000.0;
  CHECK(sample_quantile(grid, 0.25) == doctest::Approx(0.25).epsilon(1e-4));
}

TEST_CASE("sample_quantile input validation") {
  std::vector<double> empty;
  CHECK_THROWS_AS(sample_quantile(empty, 0.5), Error);
  std::vector<double> bad{1.0, std::numeric_limits<double>::quiet_NaN()};
  CHECK_THROWS_AS(sample_quantile(bad, 0.5), Error);
  std::vector<double> ok{1.0, 2.0};
  CHECK_THROWS_AS(sample_quantile(ok, 0.0), Error);
  CHECK_THROWS_AS(sample_quantile(ok, 1.0), Error);
  try {
    sample_quantile(empty, 0.5);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrKind::empty_sample);
  }
}

TEST_CASE("sample_quantile is the smallest check-function minimizer") {
  // counting characterization: #{y <= q} >= ceil(n tau), #{y < q} < ceil(n tau)
  for (int rep = 0; rep < 200; ++rep) {
    const int n = 5 + static_cast<int>(50 * rng_uniform(3, rep, 0, 0));
    std::vector<double> y(n);
    for (int i = 0; i < n; ++i) {
      // coarse rounding produces ties
      y[i] = std::round(4.0 * rng_normal(3, rep, 1, i)) / 2.0;
    }
    const double tau = 0.05 + 0.9 * rng_uniform(3, rep, 2, 0);
    const double q = sample_quantile(y, tau);
    const auto rank = static_cast<long>(quantile_rank(y.size(), tau));
    long leq = 0, lt = 0;
    for (double v : y) {
      leq += v <= q;
      lt += v < q;
    }
    CHECK(leq >= rank);
    CHECK(lt < rank);
  }
}

TEST_CASE("sample_quantile affine equivariance") {
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 3 + static_cast<int>(80 * rng_uniform(4, rep, 0, 0));
    std::vector<double> y(n), z(n);
    const double a = 0.1 + 3.0 * rng_uniform(4, rep, 1, 0);
    const double b = 10.0 * (rng_uniform(4, rep, 1, 1) - 0.5);
    for (int i = 0; i < n; ++i) {
      y[i] = rng_normal(4, rep, 2, i);
      z[i] = a * y[i] + b;
    }
    const double tau = 0.05 + 0.9 * rng_uniform(4, rep, 3, 0);
    CHECK(sample_quantile(z, tau) == a * sample_quantile(y, tau) + b);
  }
}

TEST_CASE("quantile_rank handles integer n*tau exactly") {
  CHECK(quantile_rank(10, 0.3) == 3);
  CHECK(quantile_rank(1000, 0.9) == 900);
  CHECK(quantile_rank(5, 0.5) == 3);
  CHECK(quantile_rank(3, 0.9) == 3);
  CHECK(quantile_rank(2000, 0.95) == 1900);
}
