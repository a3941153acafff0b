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

#include "gevmiss/weights.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gevmiss/errors.hpp"

namespace gevmiss {

EmpiricalCdf::EmpiricalCdf(std::vector<double> values) : sorted_(std::move(values)) {
  if (sorted_.empty()) throw DomainError("empirical CDF needs at least one value");
  for (double v : sorted_) {
    if (std::isnan(v)) throw DomainError("empirical CDF given NaN");
  }
  std::sort(sorted_.begin(), sorted_.end());
}

EmpiricalCdf EmpiricalCdf::from_series(const FlaggedSeries& series) {
  series.check_shape();
  std::vector<double> obs;
  obs.reserve(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (series.observed[i]) obs.push_back(series.values[i]);
  }
  return EmpiricalCdf(std::move(obs));
}

double EmpiricalCdf::operator()(double x) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

WeightScheme parse_weight_scheme(std::string_view name) {
  if (name == "observed" || name == "obs") return WeightScheme::kObserved;
  if (name == "unconditional" || name == "uncond") return WeightScheme::kUnconditional;
  if (name == "conditional" || name == "cond") return WeightScheme::kConditional;
  throw ConfigError("unknown weight scheme '" + std::string(name) + "'");
}

std::string_view to_string(WeightScheme scheme) {
  switch (scheme) {
    case WeightScheme::kObserved: return "obs";
    case WeightScheme::kUnconditional: return "uncond";
    case WeightScheme::kConditional: return "cond";
  }
  return "?";
}

BlockWeight unconditional_weight(const BlockSummary& summary) {
  if (summary.n_obs == 0) throw DomainError("unconditional weight: block has no observations");
  return {summary.index, static_cast<double>(summary.n_obs) /
                             static_cast<double>(summary.n_obs + summary.n_miss)};
}

BlockWeight conditional_weight(const EmpiricalCdf& ecdf, const BlockSummary& summary) {
  if (summary.n_obs == 0 || !summary.observed_max) {
    throw DomainError("conditional weight: block has no observed maximum");
  }
  if (summary.n_miss == 0) return {summary.index, 1.0};
  return {summary.index,
          std::pow(ecdf(*summary.observed_max), static_cast<double>(summary.n_miss))};
}

std::vector<BlockWeight> weigh_blocks(std::span<const BlockSummary> summaries, WeightScheme scheme,
                                      const EmpiricalCdf* ecdf) {
  if (scheme == WeightScheme::kConditional && ecdf == nullptr) {
    throw ConfigError("conditional weights require the empirical CDF of the series");
  }
  std::vector<BlockWeight> out;
  out.reserve(summaries.size());
  for (const BlockSummary& b : summaries) {
    if (b.n_obs == 0) continue;
    switch (scheme) {
      case WeightScheme::kObserved: out.push_back({b.index, 1.0}); break;
      case WeightScheme::kUnconditional: out.push_back(unconditional_weight(b)); break;
      case WeightScheme::kConditional: out.push_back(conditional_weight(*ecdf, b)); break;
    }
  }
  return out;
}

}  // namespace gevmiss
