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

#include <string>

namespace upe {

enum class LinkKind { probit, logit };

const char* link_name(LinkKind link);
LinkKind link_from_name(const std::string& name);

// CDF, density and density derivative of the link at v. For the logit the
// identity g = G(1-G) holds exactly by construction.
struct LinkEval {
  double cdf;
  double pdf;
  double pdf_deriv;
};

LinkEval link_eval(LinkKind link, double v);

// Standard normal helpers shared across the library.
double normal_cdf(double x);
double normal_pdf(double x);
// Inverse standard normal CDF, Wichura's AS 241 (PPND16), ~1e-16 relative.
double normal_quantile(double p);

// G^{-1}(p) for p in (0,1).
double link_inverse(LinkKind link, double p);

// Probabilities are clipped to [kProbClip, 1-kProbClip] inside the
// log-likelihood and the weight denominators g/(G(1-G)).
inline constexpr double kProbClip = 1e-10;
double clip_prob(double p);

}  // namespace upe
