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

#include "gevmiss/distribution.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "gevmiss/errors.hpp"

namespace gevmiss {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_gumbel(const GevParams& p) { return std::abs(p.xi) < kGumbelSwitch; }

}  // namespace

void validate(const GevParams& params) {
  if (!std::isfinite(params.mu) || !std::isfinite(params.sigma) || !std::isfinite(params.xi)) {
    throw DomainError("GEV parameters must be finite");
  }
  if (!(params.sigma > 0.0)) {
    throw DomainError("GEV scale must be > 0, got " + std::to_string(params.sigma));
  }
}

double lower_endpoint(const GevParams& params) {
  if (is_gumbel(params) || params.xi < 0.0) return -kInf;
  return params.mu - params.sigma / params.xi;
}

double upper_endpoint(const GevParams& params) {
  if (is_gumbel(params) || params.xi > 0.0) return kInf;
  return params.mu - params.sigma / params.xi;
}

double gev_cdf(const GevParams& params, double z) {
  validate(params);
  if (!std::isfinite(z)) throw DomainError("gev_cdf: z must be finite");
  const double s = (z - params.mu) / params.sigma;
  if (is_gumbel(params)) return std::exp(-std::exp(-s));
  const double t = 1.0 + params.xi * s;
  if (t <= 0.0) return params.xi > 0.0 ? 0.0 : 1.0;
  // t^(-1/xi) = exp(-log1p(xi s) / xi)
  return std::exp(-std::exp(-std::log1p(params.xi * s) / params.xi));
}

double gev_logpdf(const GevParams& params, double z) {
  validate(params);
  if (std::isnan(z)) throw DomainError("gev_logpdf: z is NaN");
  const double log_sigma = std::log(params.sigma);
  const double s = (z - params.mu) / params.sigma;
  if (is_gumbel(params)) {
    if (!std::isfinite(z)) return -kInf;
    return -log_sigma - s - std::exp(-s);
  }
  const double t = 1.0 + params.xi * s;
  if (!(t > 0.0) || !std::isfinite(t)) return -kInf;
  const double log_t = std::log1p(params.xi * s);
  return -log_sigma - (1.0 + 1.0 / params.xi) * log_t - std::exp(-log_t / params.xi);
}

double gev_quantile(const GevParams& params, double p) {
  validate(params);
  if (!(p > 0.0 && p < 1.0)) throw DomainError("gev_quantile: p must lie in (0, 1)");
  const double y = -std::log(p);
  if (is_gumbel(params)) return params.mu - params.sigma * std::log(y);
  // (y^(-xi) - 1) / xi
  return params.mu + params.sigma * std::expm1(-params.xi * std::log(y)) / params.xi;
}

double return_level(const GevParams& params, double years) {
  if (!(years > 1.0) || !std::isfinite(years)) {
    throw DomainError("return_level: return period must exceed 1");
  }
  return gev_quantile(params, 1.0 - 1.0 / years);
}

double analytic_pwm(const GevParams& params, int r) {
  validate(params);
  if (r < 0) throw DomainError("analytic_pwm: r must be >= 0");
  if (!(params.xi < 1.0)) throw DomainError("analytic_pwm: requires xi < 1");
  if (params.xi == 0.0) throw DomainError("analytic_pwm: requires xi != 0");
  const double rp1 = static_cast<double>(r) + 1.0;
  const double bracket = 1.0 - std::pow(rp1, params.xi) * std::tgamma(1.0 - params.xi);
  return (params.mu - params.sigma / params.xi * bracket) / rp1;
}

}  // namespace gevmiss
