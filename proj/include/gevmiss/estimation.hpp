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

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gevmiss/blocking.hpp"
#include "gevmiss/distribution.hpp"
#include "gevmiss/weights.hpp"

namespace gevmiss {

// Block maxima paired with their weights. Sorting moves each weight with its maximum.
class WeightedMaxima {
 public:
  struct Pair {
    double m = 0.0;
    double w = 1.0;
    friend bool operator==(const Pair&, const Pair&) = default;
  };

  WeightedMaxima() = default;
  // Throws DomainError unless every weight lies in [0, 1], every maximum is
  // finite, and at least one weight is positive.
  explicit WeightedMaxima(std::vector<Pair> pairs);
  static WeightedMaxima unit(std::span<const double> maxima);
  // Pairs observed_max of each block with the weight carrying its index.
  static WeightedMaxima from_blocks(std::span<const BlockSummary> blocks,
                                    std::span<const BlockWeight> weights);

  std::size_t size() const { return pairs_.size(); }
  std::span<const Pair> pairs() const { return pairs_; }
  bool sorted() const { return sorted_; }
  void sort_ascending();
  WeightedMaxima sorted_copy() const;

  double total_weight() const;
  std::size_t positive_weight_count() const;

 private:
  std::vector<Pair> pairs_;
  bool sorted_ = false;
};

struct PwmMoments {
  double b0 = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;

  // 2 b1 - b0 > 0 and 3 b2 - b0 > 0.
  bool nondegenerate() const { return 2.0 * b1 - b0 > 0.0 && 3.0 * b2 - b0 > 0.0; }
};

struct FitReport {
  GevParams params;
  bool converged = false;
  double objective = 0.0;  // weighted log-likelihood, MLE only (NaN for PWM)
  int iterations = 0;
  std::vector<std::string> warnings;
};

enum class FitMethod { kMle, kPwm };
FitMethod parse_fit_method(std::string_view name);
std::string_view to_string(FitMethod method);

// Contribution of one out-of-support point, before weighting.
inline constexpr double kOutOfSupportPenalty = -1e10;

// Shape bounds. A moment fit outside (lower, upper) is not converged; an MLE
// fit is not converged at or below the lower bound and only warned above the upper.
inline constexpr double kXiUpperLimit = 0.98;
inline constexpr double kXiLowerLimit = -0.99;

// sum_j w_j log g(m_j); out-of-support points contribute w_j * kOutOfSupportPenalty.
double weighted_loglik(const GevParams& params, const WeightedMaxima& data);

struct MleOptions {
  int max_iterations = 2000;
  double f_tolerance = 1e-10;
};

// Weighted maximum likelihood by Nelder-Mead on (mu, log sigma, xi).
// Non-convergence is reported in the FitReport, not thrown.
FitReport fit_mle(const WeightedMaxima& data, const MleOptions& options = {});

// Weighted sample probability-weighted moment of order r (0, 1 or 2):
//   (1 / sum w) sum_j w_j prod_{l=1..r} (j - l) / (k - l) m_(j)
// with j the ascending rank.
double pwm_b(const WeightedMaxima& data, int r);
PwmMoments pwm_moments(const WeightedMaxima& data);

// (3^xi - 1) / (2^xi - 1), equal to log 3 / log 2 at xi = 0.
double pwm_shape_ratio(double xi);

// Solves (3 b2 - b0) / (2 b1 - b0) = pwm_shape_ratio(xi) on (-0.99, 0.98).
double solve_xi(double b0, double b1, double b2);
double solve_xi(const PwmMoments& moments);

// Parameters from moments (inverse of analytic_pwm for r = 0, 1, 2).
GevParams pwm_params(const PwmMoments& moments);

FitReport fit_pwm(const WeightedMaxima& data);

FitReport fit(const WeightedMaxima& data, FitMethod method);

}  // namespace gevmiss
