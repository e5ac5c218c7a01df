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

#include "upe/design.hpp"

#include <cmath>
#include <string>

#include "upe/error.hpp"

namespace upe {

Vec Design::xdot_dot_alpha(int target, const Vec& theta) const {
  const Vec alpha_block = theta.segment(x_offset[target], x_dim[target]);
  return xdot[target] * alpha_block;
}

Design build_design(const Mat& x, const Mat& w, const BasisSpec& basis) {
  const Eigen::Index n = x.rows();
  if (n == 0) fail(ErrKind::empty_sample, "empty design input");
  if (w.rows() != 0 && w.rows() != n) {
    fail(ErrKind::dimension_mismatch, "x and w row counts differ");
  }
  if (static_cast<Eigen::Index>(basis.x_basis.size()) != x.cols()) {
    fail(ErrKind::dimension_mismatch,
         "basis entries (" + std::to_string(basis.x_basis.size()) +
             ") do not match target columns (" + std::to_string(x.cols()) + ")");
  }
  if (!x.allFinite() || (w.size() > 0 && !w.allFinite())) {
    fail(ErrKind::nonfinite_input, "design inputs must be finite");
  }

  Design d;
  d.n_targets = static_cast<int>(x.cols());
  for (XBasis b : basis.x_basis) d.d_phi_x += BasisSpec::block_dim(b);
  const int d_w = static_cast<int>(w.cols());
  d.d_z = d.d_phi_x + 1 + d_w;
  d.intercept_col = d.d_phi_x;
  if (n < d.d_z + 1) {
    fail(ErrKind::dimension_mismatch, "need at least d_z + 1 observations");
  }

  d.Z.resize(n, d.d_z);
  int col = 0;
  for (int j = 0; j < d.n_targets; ++j) {
    const XBasis b = basis.x_basis[j];
    const int dim = BasisSpec::block_dim(b);
    d.x_offset.push_back(col);
    d.x_dim.push_back(dim);
    d.Z.col(col) = x.col(j);
    Mat xd(n, dim);
    xd.col(0).setOnes();
    if (b == XBasis::quadratic) {
      d.Z.col(col + 1) = x.col(j).array().square();
      xd.col(1) = 2.0 * x.col(j);
    }
    d.xdot.push_back(std::move(xd));
    col += dim;
  }
  d.Z.col(col).setOnes();
  if (d_w > 0) d.Z.rightCols(d_w) = w;
  return d;
}

}  // namespace upe
