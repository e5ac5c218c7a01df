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

#include "upe/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "upe/error.hpp"
#include "upe/rng.hpp"
#include "upe/textio.hpp"

namespace upe {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

bool is_missing_token(const std::string& t) {
  return t.empty() || t == "NA" || t == "na" || t == "NaN" || t == "nan" ||
         t == "NAN";
}

// Returns false for a missing token; throws ParseError on malformed input.
bool parse_field(const std::string& token, std::size_t row1, std::size_t col1,
                 double* out) {
  const std::string t = trim(token);
  if (is_missing_token(t)) return false;
  const char* begin = t.data();
  const char* end = begin + t.size();
  const auto res = std::from_chars(begin, end, *out);
  if (res.ec != std::errc{} || res.ptr != end) {
    fail(ErrKind::parse_error, "row " + std::to_string(row1) + ", column " +
                                   std::to_string(col1) + ": cannot parse '" +
                                   t + "'");
  }
  return std::isfinite(*out);
}

}  // namespace

Dataset ingest_csv(const std::string& path, const CsvSchema& schema,
                   LoadReport* report) {
  if (schema.y.empty()) fail(ErrKind::invalid_config, "no outcome column");
  if (schema.x.empty() || schema.x.size() > 2) {
    fail(ErrKind::wrong_target_count, "need 1 or 2 target columns");
  }
  std::ifstream f(path);
  if (!f) fail(ErrKind::io_error, "cannot open " + path);

  std::string header_line;
  if (!std::getline(f, header_line)) {
    fail(ErrKind::parse_error, "missing header row in " + path);
  }
  const auto header = split_csv_line(header_line);

  std::vector<std::string> wanted;
  wanted.push_back(schema.y);
  wanted.insert(wanted.end(), schema.x.begin(), schema.x.end());
  wanted.insert(wanted.end(), schema.w.begin(), schema.w.end());

  std::vector<std::size_t> col_of;
  for (const auto& name : wanted) {
    auto it = std::find_if(header.begin(), header.end(),
                           [&](const std::string& h) { return trim(h) == name; });
    if (it == header.end()) {
      fail(ErrKind::missing_column, "column '" + name + "' not in header");
    }
    col_of.push_back(static_cast<std::size_t>(it - header.begin()));
  }

  const std::size_t k = wanted.size();
  std::vector<std::vector<double>> cols(k);
  std::size_t rows_read = 0, dropped = 0;
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(f, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    ++rows_read;
    const auto fields = split_csv_line(line);
    std::vector<double> vals(k);
    bool ok = true;
    for (std::size_t j = 0; j < k; ++j) {
      if (col_of[j] >= fields.size() ||
          !parse_field(fields[col_of[j]], lineno, col_of[j] + 1, &vals[j])) {
        ok = false;
        break;
      }
    }
    if (!ok) {
      ++dropped;
      continue;
    }
    for (std::size_t j = 0; j < k; ++j) cols[j].push_back(vals[j]);
  }
  const std::size_t n = cols[0].size();
  if (n == 0) fail(ErrKind::empty_after_cleaning, "no usable rows in " + path);

  Dataset d;
  d.y_name = schema.y;
  d.x_names = schema.x;
  d.w_names = schema.w;
  d.y = Eigen::Map<const Vec>(cols[0].data(), static_cast<Eigen::Index>(n));
  d.x.resize(n, static_cast<Eigen::Index>(schema.x.size()));
  for (std::size_t j = 0; j < schema.x.size(); ++j) {
    d.x.col(static_cast<Eigen::Index>(j)) =
        Eigen::Map<const Vec>(cols[1 + j].data(), static_cast<Eigen::Index>(n));
  }
  d.w.resize(n, static_cast<Eigen::Index>(schema.w.size()));
  for (std::size_t j = 0; j < schema.w.size(); ++j) {
    d.w.col(static_cast<Eigen::Index>(j)) = Eigen::Map<const Vec>(
        cols[1 + schema.x.size() + j].data(), static_cast<Eigen::Index>(n));
  }

  if (report) {
    report->rows_read = rows_read;
    report->rows_dropped = dropped;
    report->ranges.clear();
    for (std::size_t j = 0; j < k; ++j) {
      ColumnRange r;
      r.name = wanted[j];
      r.min = *std::min_element(cols[j].begin(), cols[j].end());
      r.max = *std::max_element(cols[j].begin(), cols[j].end());
      report->ranges.push_back(r);
    }
  }
  return d;
}

void write_synth_csv(const std::string& profile, int n, std::uint64_t seed,
                     const std::string& path) {
  if (n < 1) fail(ErrKind::invalid_config, "synth data needs n >= 1");
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrKind::io_error, "cannot open " + path);

  const auto un = static_cast<std::size_t>(n);
  if (profile == "mc") {
    // simulation model: y = x + noise, x and noise standard normal
    std::vector<double> x(un), u(un);
    rng_fill_normal(seed, 0, 0, un, x.data());
    rng_fill_normal(seed, 0, 1, un, u.data());
    f << "y,x\n";
    for (std::size_t i = 0; i < un; ++i) {
      f << fmt_sig9(x[i] + u[i]) << ',' << fmt_sig9(x[i]) << '\n';
    }
    return;
  }
  if (profile == "wage1-like") {
    // Schema-compatible synthetic stand-in for a classic household labor
    // survey: Mincer-style log wages with rounded schooling years and
    // demographic dummies. Coefficients are plausible, not estimates.
    std::vector<double> z(6 * un);
    for (std::uint32_t c = 0; c < 6; ++c) {
      rng_fill_normal(seed, 1, c, un, z.data() + c * un);
    }
    std::vector<double> uni(2 * un);
    rng_fill_uniform(seed, 2, 0, 2 * un, uni.data());
    f << "lwage,educ,exper,tenure,nonwhite,female\n";
    for (std::size_t i = 0; i < un; ++i) {
      double educ = std::round(12.5 + 2.8 * z[i]);
      educ = std::clamp(educ, 0.0, 18.0);
      double exper = std::round(17.0 + 13.0 * z[un + i]);
      exper = std::clamp(exper, 1.0, 51.0);
      double tenure = std::round(5.0 * std::fabs(z[2 * un + i]));
      tenure = std::clamp(tenure, 0.0, 44.0);
      const double nonwhite = uni[i] < 0.10 ? 1.0 : 0.0;
      const double female = uni[un + i] < 0.48 ? 1.0 : 0.0;
      const double lwage = 0.28 + 0.083 * educ + 0.0045 * exper +
                           0.019 * tenure - 0.064 * nonwhite -
                           0.30 * female + 0.42 * z[3 * un + i];
      f << fmt_sig9(lwage) << ',' << fmt_sig9(educ) << ',' << fmt_sig9(exper)
        << ',' << fmt_sig9(tenure) << ',' << fmt_sig9(nonwhite) << ','
        << fmt_sig9(female) << '\n';
    }
    return;
  }
  fail(ErrKind::invalid_config, "unknown synth profile '" + profile + "'");
}

}  // namespace upe
