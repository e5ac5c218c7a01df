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

#include <cstdint>
#include <string>
#include <vector>

#include "upe/design.hpp"

namespace upe {

struct Dataset {
  Vec y;
  Mat x;  // 1-2 target columns
  Mat w;  // 0+ control columns
  std::string y_name;
  std::vector<std::string> x_names;
  std::vector<std::string> w_names;

  int n() const { return static_cast<int>(y.size()); }
};

struct ColumnRange {
  std::string name;
  double min = 0.0;
  double max = 0.0;
};

struct LoadReport {
  std::size_t rows_read = 0;
  std::size_t rows_dropped = 0;  // rows with missing or non-finite fields
  std::vector<ColumnRange> ranges;
};

struct CsvSchema {
  std::string y;
  std::vector<std::string> x;
  std::vector<std::string> w;
};

// Header-based CSV ingestion. Fields that are empty or read NA/NaN drop the
// whole row (counted); malformed numerics raise ParseError with the 1-based
// row and column.
Dataset ingest_csv(const std::string& path, const CsvSchema& schema,
                   LoadReport* report = nullptr);

// Synthetic fixtures. "wage1-like": a 6-column Mincer-style survey sample
// (lwage, educ, exper, tenure, nonwhite, female). "mc": the simulation DGP
// sample with columns (y, x).
void write_synth_csv(const std::string& profile, int n, std::uint64_t seed,
                     const std::string& path);

}  // namespace upe
