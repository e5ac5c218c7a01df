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

#include <cstddef>
#include <span>
#include <vector>

namespace upe {

// 1-based rank ceil(n*tau) with a snap guard against floating-point noise
// when n*tau sits on an integer.
std::size_t quantile_rank(std::size_t n, double tau);

// Smallest minimizer of the check-function objective: the order statistic
// y_(ceil(n*tau)). Validates finiteness of the sample.
double sample_quantile(std::span<const double> y, double tau);

// Same order statistic on an already ascending-sorted vector; no checks.
double sorted_quantile(const std::vector<double>& sorted_y, double tau);

}  // namespace upe
