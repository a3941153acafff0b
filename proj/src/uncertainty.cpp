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

#include "gevmiss/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "gevmiss/errors.hpp"
#include "gevmiss/rng.hpp"

namespace gevmiss {

namespace {

constexpr double kDivergenceFactor = 1e6;
constexpr int kMaxRedraws = 1000;

struct Replicate {
  bool ok = false;
  std::vector<double> levels;
};

std::optional<std::vector<double>> levels_for(const FitReport& fit, const BootstrapConfig& cfg,
                                              double scale) {
  if (!fit.converged) return std::nullopt;
  std::vector<double> out;
  out.reserve(cfg.return_periods.size());
  for (double t : cfg.return_periods) {
    const double z = return_level(fit.params, t);
    if (!std::isfinite(z) || std::abs(z) > kDivergenceFactor * scale) return std::nullopt;
    out.push_back(z);
  }
  return out;
}

}  // namespace

void BootstrapConfig::validate() const {
  if (replicates < 2) throw ConfigError("bootstrap needs at least 2 replicates");
  if (min_k < 3) throw ConfigError("bootstrap min_k must be >= 3");
  for (double t : return_periods) {
    if (!(t > 1.0)) throw ConfigError("return periods must exceed 1");
  }
}

BootstrapResult bootstrap_return_levels(const WeightedMaxima& data, FitMethod method,
                                        const BootstrapConfig& config) {
  config.validate();
  const std::size_t k = data.size();
  if (k < config.min_k) {
    throw DataError("bootstrap needs at least " + std::to_string(config.min_k) + " maxima, got " +
                    std::to_string(k));
  }
  double scale = 0.0;
  for (const auto& p : data.pairs()) scale = std::max(scale, std::abs(p.m));
  if (scale == 0.0) scale = 1.0;

  BootstrapResult result;
  try {
    result.point_fit = fit(data, method);
  } catch (const std::exception& e) {
    throw NumericalError(std::string("bootstrap failed: point estimate: ") + e.what());
  }
  const auto point = levels_for(result.point_fit, config, scale);
  if (!point) throw NumericalError("point estimate did not converge");

  std::vector<Replicate> reps(config.replicates);
  const auto pairs = data.pairs();
  const unsigned threads = config.threads == 0 ? default_thread_count() : config.threads;
  parallel_for(reps.size(), threads, [&](std::size_t b) {
    Rng rng = make_stream(config.seed, b);
    std::uniform_int_distribution<std::size_t> pick(0, k - 1);
    std::vector<std::size_t> idx(k);
    bool drawn = false;
    for (int attempt = 0; attempt < kMaxRedraws && !drawn; ++attempt) {
      for (std::size_t& i : idx) i = pick(rng);
      if (!config.enforce_min_k) {
        drawn = true;
        break;
      }
      std::vector<std::size_t> distinct = idx;
      std::sort(distinct.begin(), distinct.end());
      const auto n_distinct = static_cast<std::size_t>(
          std::unique(distinct.begin(), distinct.end()) - distinct.begin());
      drawn = n_distinct >= config.min_k;
    }
    if (!drawn) return;
    std::vector<WeightedMaxima::Pair> sample;
    sample.reserve(k);
    for (std::size_t i : idx) sample.push_back(pairs[i]);
    try {
      const WeightedMaxima resampled(std::move(sample));
      if (auto lv = levels_for(fit(resampled, method), config, scale)) {
        reps[b].ok = true;
        reps[b].levels = std::move(*lv);
      }
    } catch (const std::exception&) {
    }
  });

  std::vector<const Replicate*> good;
  for (const Replicate& r : reps) {
    if (r.ok) good.push_back(&r);
  }
  result.failed_replicates = reps.size() - good.size();
  if (good.size() < 2 || static_cast<double>(good.size()) < 0.1 * static_cast<double>(reps.size())) {
    throw NumericalError("bootstrap failed: only " + std::to_string(good.size()) + " of " +
                         std::to_string(reps.size()) + " refits succeeded");
  }

  for (std::size_t t = 0; t < config.return_periods.size(); ++t) {
    // Sorted two-pass variance: independent of replicate order.
    std::vector<double> values;
    values.reserve(good.size());
    for (const Replicate* r : good) values.push_back(r->levels[t]);
    std::sort(values.begin(), values.end());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    ReturnLevelEstimate est;
    est.period = config.return_periods[t];
    est.level = (*point)[t];
    est.se = std::sqrt(ss / static_cast<double>(good.size() - 1));
    est.replicates_used = good.size();
    result.levels.push_back(est);
  }
  return result;
}

}  // namespace gevmiss
