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

#include <stdexcept>
#include <string>

namespace upe {

// Fine-grained failure kinds. category() maps them onto the coarse process
// exit codes shared by the C API and the CLI (2 config, 3 data, 4 numeric).
enum class ErrKind {
  empty_sample,
  nonfinite_input,
  degenerate_sample,
  dimension_mismatch,
  wrong_target_count,
  all_one_class,
  rank_deficient_design,
  separation_detected,
  numerical_underflow,
  singular_hessian,
  density_near_zero,
  zero_denominator,
  zero_variance,
  pivot_mismatch,
  quadrature_failure,
  minimum_reps,
  missing_column,
  parse_error,
  empty_after_cleaning,
  invalid_config,
  io_error,
};

enum class ErrCategory : int { config = 2, data = 3, numeric = 4 };

ErrCategory category(ErrKind kind);
const char* kind_name(ErrKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrKind kind, const std::string& message)
      : std::runtime_error(std::string(kind_name(kind)) + ": " + message),
        kind_(kind) {}

  ErrKind kind() const { return kind_; }
  ErrCategory category() const { return upe::category(kind_); }

 private:
  ErrKind kind_;
};

[[noreturn]] inline void fail(ErrKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace upe
