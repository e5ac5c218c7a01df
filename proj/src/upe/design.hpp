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

#include <Eigen/Dense>
#include <vector>

namespace upe {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class XBasis { linear, quadratic };

// Basis layout: Z_i = (phi_x(X_i)', phi_w(W_i)')' with phi_w(w) = (1, w')'.
// phi_x stacks one block per target covariate; the intercept always lives in
// the phi_w part.
struct BasisSpec {
  std::vector<XBasis> x_basis;  // one entry per target covariate

  static int block_dim(XBasis b) { return b == XBasis::linear ? 1 : 2; }
};

struct Design {
  Mat Z;                       // n x d_z, columns [phi_x | 1 | W]
  std::vector<Mat> xdot;       // per target j: n x dim_j, d(phi_x block)/dx_j
  std::vector<int> x_offset;   // column offset of target j's block in Z
  std::vector<int> x_dim;      // block dimension of target j
  int n_targets = 0;
  int d_phi_x = 0;
  int d_z = 0;
  int intercept_col = 0;       // == d_phi_x

  // (xdot_j' alpha_j) per observation for target j, alpha indexed as in Z.
  Vec xdot_dot_alpha(int target, const Vec& theta) const;
};

// x: n x (number of targets), w: n x (number of controls, possibly 0).
Design build_design(const Mat& x, const Mat& w, const BasisSpec& basis);

}  // namespace upe
