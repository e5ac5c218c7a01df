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

#include "upe/error.hpp"

namespace upe {

ErrCategory category(ErrKind kind) {
  switch (kind) {
    case ErrKind::invalid_config:
    case ErrKind::wrong_target_count:
    case ErrKind::pivot_mismatch:
    case ErrKind::minimum_reps:
      return ErrCategory::config;
    case ErrKind::empty_sample:
    case ErrKind::nonfinite_input:
    case ErrKind::dimension_mismatch:
    case ErrKind::missing_column:
    case ErrKind::parse_error:
    case ErrKind::empty_after_cleaning:
    case ErrKind::io_error:
      return ErrCategory::data;
    default:
      return ErrCategory::numeric;
  }
}

const char* kind_name(ErrKind kind) {
  switch (kind) {
    case ErrKind::empty_sample: return "EmptySample";
    case ErrKind::nonfinite_input: return "NonFiniteInput";
    case ErrKind::degenerate_sample: return "DegenerateSample";
    case ErrKind::dimension_mismatch: return "DimensionMismatch";
    case ErrKind::wrong_target_count: return "WrongTargetCount";
    case ErrKind::all_one_class: return "AllOneClass";
    case ErrKind::rank_deficient_design: return "RankDeficientDesign";
    case ErrKind::separation_detected: return "SeparationDetected";
    case ErrKind::numerical_underflow: return "NumericalUnderflow";
    case ErrKind::singular_hessian: return "SingularHessian";
    case ErrKind::density_near_zero: return "DensityNearZero";
    case ErrKind::zero_denominator: return "ZeroDenominator";
    case ErrKind::zero_variance: return "ZeroVariance";
    case ErrKind::pivot_mismatch: return "PivotMismatch";
    case ErrKind::quadrature_failure: return "QuadratureFailure";
    case ErrKind::minimum_reps: return "MinimumReps";
    case ErrKind::missing_column: return "MissingColumn";
    case ErrKind::parse_error: return "ParseError";
    case ErrKind::empty_after_cleaning: return "EmptyAfterCleaning";
    case ErrKind::invalid_config: return "InvalidConfig";
    case ErrKind::io_error: return "IoError";
  }
  return "UnknownError";
}

}  // namespace upe
