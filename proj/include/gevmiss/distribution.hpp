// Copyright 2026 The gevmiss Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Generalized extreme value distribution primitives.
//
//   G(z) = exp(-[1 + xi (z - mu) / sigma]^(-1/xi)),   1 + xi (z - mu) / sigma > 0
//   G(z) = exp(-exp(-(z - mu) / sigma)),              xi = 0
//
// All functions are pure and thread-safe.

namespace gevmiss {

struct GevParams {
  double mu = 0.0;
  double sigma = 1.0;
  double xi = 0.0;

  friend bool operator==(const GevParams&, const GevParams&) = default;
};

// |xi| below this evaluates the Gumbel branch.
inline constexpr double kGumbelSwitch = 1e-8;

// Throws DomainError unless sigma > 0 and every field is finite.
void validate(const GevParams& params);

// Lower support endpoint (-inf unless xi > 0).
double lower_endpoint(const GevParams& params);
// Upper support endpoint (+inf unless xi < 0).
double upper_endpoint(const GevParams& params);

double gev_cdf(const GevParams& params, double z);

// Log-density. Returns -infinity outside the support; that is not an error.
double gev_logpdf(const GevParams& params, double z);

// Inverse CDF for p in (0, 1).
double gev_quantile(const GevParams& params, double p);

// Level exceeded on average once every `years` blocks (one block per year).
double return_level(const GevParams& params, double years);

// E[X F(X)^r] in closed form. Requires xi < 1 and xi != 0.
double analytic_pwm(const GevParams& params, int r);

}  // namespace gevmiss
