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

#pragma once

#include <span>

namespace upe {

enum class KernelKind { gaussian };

struct KernelSpec {
  KernelKind kind = KernelKind::gaussian;
  double bandwidth = 0.0;  // > 0, outcome units

  void validate() const;
};

// Sample standard deviation with the n-1 divisor.
double sample_sd(std::span<const double> y);

// h = 1.06 * sd(y) * n^(-1/4). The n^(-1/4) rate keeps n h^3 -> inf and
// n h^5 -> 0 simultaneously.
double silverman_bandwidth(std::span<const double> y);

// (1/n) sum K_h(y_i - point) with K_h(u) = K(u/h)/h.
double kde_at(std::span<const double> y, double point, const KernelSpec& kernel);

// Derivative of kde_at in `point`: (1/(n h^2)) sum u_i K(u_i),
// u_i = (y_i - point)/h for the Gaussian kernel.
double kde_derivative_at(std::span<const double> y, double point,
                         const KernelSpec& kernel);

}  // namespace upe
