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

#include "upe/kde.hpp"

#include <cmath>

#include "upe/error.hpp"
#include "upe/links.hpp"

namespace upe {

void KernelSpec::validate() const {
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    fail(ErrKind::invalid_config, "kernel bandwidth must be positive");
  }
}

double sample_sd(std::span<const double> y) {
  const std::size_t n = y.size();
  if (n < 2) fail(ErrKind::empty_sample, "sample_sd needs n >= 2");
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : y) {
    const double d = v - mean;
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(n - 1));
}

double silverman_bandwidth(std::span<const double> y) {
  const double sd = sample_sd(y);
  if (!(sd > 0.0)) {
    fail(ErrKind::degenerate_sample, "zero sample standard deviation");
  }
  return 1.06 * sd * std::pow(static_cast<double>(y.size()), -0.25);
}

double kde_at(std::span<const double> y, double point, const KernelSpec& kernel) {
  kernel.validate();
  if (y.empty()) fail(ErrKind::empty_sample, "kde_at on empty sample");
  const double h = kernel.bandwidth;
  double acc = 0.0;
  for (double v : y) acc += normal_pdf((v - point) / h);
  return acc / (static_cast<double>(y.size()) * h);
}

double kde_derivative_at(std::span<const double> y, double point,
                         const KernelSpec& kernel) {
  kernel.validate();
  if (y.empty()) fail(ErrKind::empty_sample, "kde_derivative_at on empty sample");
  const double h = kernel.bandwidth;
  double acc = 0.0;
  for (double v : y) {
    const double u = (v - point) / h;
    acc += u * normal_pdf(u);
  }
  return acc / (static_cast<double>(y.size()) * h * h);
}

}  // namespace upe
