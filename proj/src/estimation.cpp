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

#include "gevmiss/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "gevmiss/errors.hpp"
#include "gevmiss/optimize.hpp"

namespace gevmiss {

namespace {

constexpr double kEulerGamma = 0.57721566490153286;

bool pair_less(const WeightedMaxima::Pair& a, const WeightedMaxima::Pair& b) {
  return a.m < b.m || (a.m == b.m && a.w < b.w);
}

// The upper bound is where the moment equations stop existing; maximum
// likelihood remains valid there, so for MLE it only warns.
void check_shape_limits(FitReport& report, bool upper_is_fatal) {
  const double xi = report.params.xi;
  if (xi <= kXiLowerLimit || xi >= kXiUpperLimit) {
    if (xi <= kXiLowerLimit || upper_is_fatal) report.converged = false;
    report.warnings.push_back("shape estimate " + std::to_string(xi) +
                              " outside (-0.99, 0.98)");
  }
}

}  // namespace

WeightedMaxima::WeightedMaxima(std::vector<Pair> pairs) : pairs_(std::move(pairs)) {
  bool any_positive = false;
  for (const Pair& p : pairs_) {
    if (!std::isfinite(p.m)) throw DomainError("weighted maxima: non-finite maximum");
    if (!(p.w >= 0.0 && p.w <= 1.0)) {
      throw DomainError("weighted maxima: weight " + std::to_string(p.w) + " outside [0, 1]");
    }
    any_positive = any_positive || p.w > 0.0;
  }
  if (!pairs_.empty() && !any_positive) throw DomainError("weighted maxima: all weights are zero");
  sorted_ = std::is_sorted(pairs_.begin(), pairs_.end(), pair_less);
}

WeightedMaxima WeightedMaxima::unit(std::span<const double> maxima) {
  std::vector<Pair> pairs;
  pairs.reserve(maxima.size());
  for (double m : maxima) pairs.push_back({m, 1.0});
  return WeightedMaxima(std::move(pairs));
}

WeightedMaxima WeightedMaxima::from_blocks(std::span<const BlockSummary> blocks,
                                           std::span<const BlockWeight> weights) {
  std::vector<Pair> pairs;
  pairs.reserve(weights.size());
  for (const BlockWeight& bw : weights) {
    const auto it = std::find_if(blocks.begin(), blocks.end(),
                                 [&](const BlockSummary& b) { return b.index == bw.block; });
    if (it == blocks.end() || !it->observed_max) {
      throw DomainError("weight for block " + std::to_string(bw.block) +
                        " has no matching observed maximum");
    }
    pairs.push_back({*it->observed_max, bw.w});
  }
  return WeightedMaxima(std::move(pairs));
}

void WeightedMaxima::sort_ascending() {
  if (sorted_) return;
  std::stable_sort(pairs_.begin(), pairs_.end(), pair_less);
  sorted_ = true;
}

WeightedMaxima WeightedMaxima::sorted_copy() const {
  WeightedMaxima copy = *this;
  copy.sort_ascending();
  return copy;
}

double WeightedMaxima::total_weight() const {
  double s = 0.0;
  for (const Pair& p : pairs_) s += p.w;
  return s;
}

std::size_t WeightedMaxima::positive_weight_count() const {
  return static_cast<std::size_t>(
      std::count_if(pairs_.begin(), pairs_.end(), [](const Pair& p) { return p.w > 0.0; }));
}

FitMethod parse_fit_method(std::string_view name) {
  if (name == "mle") return FitMethod::kMle;
  if (name == "pwm" || name == "mom") return FitMethod::kPwm;
  throw ConfigError("unknown fit method '" + std::string(name) + "'");
}

std::string_view to_string(FitMethod method) {
  return method == FitMethod::kMle ? "mle" : "mom";
}

double weighted_loglik(const GevParams& params, const WeightedMaxima& data) {
  validate(params);
  double total = 0.0;
  for (const auto& p : data.pairs()) {
    if (p.w == 0.0) continue;
    const double lp = gev_logpdf(params, p.m);
    total += p.w * (std::isfinite(lp) ? lp : kOutOfSupportPenalty);
  }
  return total;
}

FitReport fit_mle(const WeightedMaxima& data, const MleOptions& options) {
  if (data.size() < 3 || data.positive_weight_count() < 3) {
    throw DomainError("maximum likelihood needs at least 3 maxima with positive weight");
  }
  const WeightedMaxima sorted = data.sorted_copy();

  double lo = INFINITY;
  double hi = -INFINITY;
  for (const auto& p : sorted.pairs()) {
    if (p.w == 0.0) continue;
    lo = std::min(lo, p.m);
    hi = std::max(hi, p.m);
  }
  if (!(hi > lo)) throw NumericalError("all maxima are identical; scale is not identifiable");

  FitReport report;
  GevParams start;
  bool have_start = false;
  try {
    const FitReport pwm = fit_pwm(sorted);
    if (pwm.converged && std::isfinite(weighted_loglik(pwm.params, sorted)) &&
        weighted_loglik(pwm.params, sorted) > 0.5 * kOutOfSupportPenalty) {
      start = pwm.params;
      have_start = true;
    }
  } catch (const std::exception&) {
  }
  if (!have_start) {
    const double wsum = sorted.total_weight();
    double mean = 0.0;
    for (const auto& p : sorted.pairs()) mean += p.w * p.m;
    mean /= wsum;
    double var = 0.0;
    for (const auto& p : sorted.pairs()) var += p.w * (p.m - mean) * (p.m - mean);
    const double sd = std::sqrt(var / wsum);
    start.sigma = sd * std::sqrt(6.0) / std::numbers::pi;
    start.mu = mean - kEulerGamma * start.sigma;
    start.xi = 0.1;
    report.warnings.push_back("moment estimator failed; using Gumbel moment start");
  }

  const std::function<double(const std::array<double, 3>&)> objective =
      [&](const std::array<double, 3>& theta) -> double {
        const GevParams p{theta[0], std::exp(theta[1]), theta[2]};
        if (!std::isfinite(p.sigma) || !(p.sigma > 0.0)) return INFINITY;
        return -weighted_loglik(p, sorted);
      };

  const std::array<double, 3> step{0.25 * start.sigma, 0.2, 0.1};
  NelderMeadOptions nm;
  nm.max_iterations = options.max_iterations;
  nm.f_tolerance = options.f_tolerance;
  auto result = nelder_mead<3>(objective, {start.mu, std::log(start.sigma), start.xi}, step, nm);
  int iterations = result.iterations;
  // Restart from the optimum to guard against a collapsed simplex.
  if (iterations < options.max_iterations) {
    nm.max_iterations = options.max_iterations - iterations;
    const auto again = nelder_mead<3>(objective, result.x, step, nm);
    iterations += again.iterations;
    if (again.value <= result.value) {
      result = again;
    } else {
      result.converged = again.converged;
    }
  }

  report.params = {result.x[0], std::exp(result.x[1]), result.x[2]};
  report.objective = -result.value;
  report.iterations = iterations;
  report.converged = result.converged && std::isfinite(report.objective) &&
                     report.objective > 0.5 * kOutOfSupportPenalty;
  if (!result.converged) report.warnings.push_back("simplex did not converge");
  if (report.params.xi <= -1.0) {
    report.warnings.push_back("shape estimate <= -1; likelihood is unbounded there");
  }
  check_shape_limits(report, false);
  return report;
}

double pwm_b(const WeightedMaxima& data, int r) {
  if (r < 0 || r > 2) throw DomainError("pwm_b: order must be 0, 1 or 2");
  const std::size_t k = data.size();
  if (k <= static_cast<std::size_t>(r)) throw DomainError("pwm_b: need more maxima than the order");
  const WeightedMaxima sorted_storage = data.sorted() ? WeightedMaxima() : data.sorted_copy();
  const WeightedMaxima& sorted = data.sorted() ? data : sorted_storage;

  const double kd = static_cast<double>(k);
  double num = 0.0;
  double wsum = 0.0;
  const auto pairs = sorted.pairs();
  for (std::size_t idx = 0; idx < k; ++idx) {
    const double j = static_cast<double>(idx + 1);
    double rank_factor = 1.0;
    for (int l = 1; l <= r; ++l) rank_factor *= (j - l) / (kd - l);
    num += pairs[idx].w * rank_factor * pairs[idx].m;
    wsum += pairs[idx].w;
  }
  return num / wsum;
}

PwmMoments pwm_moments(const WeightedMaxima& data) {
  const WeightedMaxima sorted = data.sorted_copy();
  return {pwm_b(sorted, 0), pwm_b(sorted, 1), pwm_b(sorted, 2)};
}

double pwm_shape_ratio(double xi) {
  if (xi == 0.0) return std::log(3.0) / std::numbers::ln2;
  return std::expm1(xi * std::log(3.0)) / std::expm1(xi * std::numbers::ln2);
}

double solve_xi(double b0, double b1, double b2) {
  const double d1 = 2.0 * b1 - b0;
  const double d2 = 3.0 * b2 - b0;
  if (!(d1 > 0.0) || !(d2 > 0.0) || !std::isfinite(d1) || !std::isfinite(d2)) {
    throw NumericalError("degenerate moments: 2 b1 - b0 = " + std::to_string(d1) +
                         ", 3 b2 - b0 = " + std::to_string(d2));
  }
  const double target = d2 / d1;
  auto residual = [target](double xi) { return pwm_shape_ratio(xi) - target; };

  double lo = kXiLowerLimit;
  double hi = kXiUpperLimit;
  const double r_lo = residual(lo);
  const double r_hi = residual(hi);
  if (r_lo > 0.0 || r_hi < 0.0) {
    throw NumericalError("no shape root: moment ratio " + std::to_string(target) +
                         " outside [" + std::to_string(pwm_shape_ratio(lo)) + ", " +
                         std::to_string(pwm_shape_ratio(hi)) + "]");
  }
  if (r_lo == 0.0) return lo;
  if (r_hi == 0.0) return hi;

  // Bracket around the quadratic approximation when it straddles the root.
  const double c = d1 / d2 - std::numbers::ln2 / std::log(3.0);
  const double guess = std::clamp(-(7.8590 * c + 2.9554 * c * c), lo, hi);
  const double a = std::max(lo, guess - 0.05);
  const double b = std::min(hi, guess + 0.05);
  if (residual(a) <= 0.0 && residual(b) >= 0.0) {
    lo = a;
    hi = b;
  }
  while (hi - lo >= 1e-10) {
    const double mid = 0.5 * (lo + hi);
    const double r = residual(mid);
    if (r == 0.0) return mid;
    (r < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double solve_xi(const PwmMoments& moments) { return solve_xi(moments.b0, moments.b1, moments.b2); }

GevParams pwm_params(const PwmMoments& moments) {
  const double xi = solve_xi(moments);
  const double d1 = 2.0 * moments.b1 - moments.b0;
  GevParams p;
  p.xi = xi;
  if (std::abs(xi) < kGumbelSwitch) {
    p.sigma = d1 / std::numbers::ln2;
    p.mu = moments.b0 - kEulerGamma * p.sigma;
    return p;
  }
  const double g = std::tgamma(1.0 - xi);
  p.sigma = xi * d1 / (g * std::expm1(xi * std::numbers::ln2));
  p.mu = moments.b0 + p.sigma / xi * (1.0 - g);
  return p;
}

FitReport fit_pwm(const WeightedMaxima& data) {
  if (data.size() < 3) throw DomainError("moment estimator needs at least 3 maxima");
  const PwmMoments moments = pwm_moments(data);
  if (!moments.nondegenerate()) {
    throw NumericalError("degenerate probability-weighted moments");
  }
  FitReport report;
  report.params = pwm_params(moments);
  if (!(report.params.sigma > 0.0) || !std::isfinite(report.params.mu)) {
    throw NumericalError("moment estimator produced a non-positive scale");
  }
  report.converged = true;
  report.objective = NAN;
  check_shape_limits(report, true);
  return report;
}

FitReport fit(const WeightedMaxima& data, FitMethod method) {
  return method == FitMethod::kMle ? fit_mle(data) : fit_pwm(data);
}

}  // namespace gevmiss
