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

#include "upe/quantile.hpp"

#include <algorithm>
#include <cmath>

#include "upe/error.hpp"

namespace upe {

std::size_t quantile_rank(std::size_t n, double tau) {
  if (!(tau > 0.0 && tau < 1.0)) {
    fail(ErrKind::invalid_config, "tau must lie in (0,1)");
  }
  const double nt = static_cast<double>(n) * tau;
  const double nearest = std::round(nt);
  double k;
  if (std::fabs(nt - nearest) < 1e-9 * std::max(1.0, nt)) {
    k = nearest;  // n*tau is an integer up to representation error
  } else {
    k = std::ceil(nt);
  }
  const auto rank = static_cast<std::size_t>(std::max(1.0, k));
  return std::min(rank, n);
}

double sample_quantile(std::span<const double> y, double tau) {
  if (y.empty()) fail(ErrKind::empty_sample, "sample_quantile on empty sample");
  for (double v : y) {
    if (!std::isfinite(v)) {
      fail(ErrKind::nonfinite_input, "sample_quantile on non-finite sample");
    }
  }
  std::vector<double> work(y.begin(), y.end());
  const std::size_t rank = quantile_rank(work.size(), tau);
  std::nth_element(work.begin(), work.begin() + (rank - 1), work.end());
  return work[rank - 1];
}

double sorted_quantile(const std::vector<double>& sorted_y, double tau) {
  if (sorted_y.empty()) fail(ErrKind::empty_sample, "quantile of empty sample");
  return sorted_y[quantile_rank(sorted_y.size(), tau) - 1];
}

}  // namespace upe
