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

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "gevmiss/blocking.hpp"

namespace gevmiss {

// Empirical CDF of all observed series values, F(x) = #{v <= x} / N_obs.
class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(std::vector<double> values);
  static EmpiricalCdf from_series(const FlaggedSeries& series);

  double operator()(double x) const;
  std::size_t size() const { return sorted_.size(); }
  std::span<const double> sorted_values() const { return sorted_; }

 private:
  std::vector<double> sorted_;
};

struct BlockWeight {
  std::size_t block = 0;
  double w = 1.0;
};

enum class WeightScheme { kObserved, kUnconditional, kConditional };

WeightScheme parse_weight_scheme(std::string_view name);
std::string_view to_string(WeightScheme scheme);

// n_obs / (n_obs + n_miss): the chance the true maximum was among the observed.
BlockWeight unconditional_weight(const BlockSummary& summary);

// F(m)^n_miss: the chance every missing value fell below the observed maximum m.
BlockWeight conditional_weight(const EmpiricalCdf& ecdf, const BlockSummary& summary);

// Weights for every block with at least one observation, in block order.
// Blocks with n_obs == 0 carry no maximum and are skipped.
std::vector<BlockWeight> weigh_blocks(std::span<const BlockSummary> summaries, WeightScheme scheme,
                                      const EmpiricalCdf* ecdf = nullptr);

}  // namespace gevmiss
