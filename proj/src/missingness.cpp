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

#include "gevmiss/missingness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "gevmiss/errors.hpp"

namespace gevmiss {

namespace {

void require_unit(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw ConfigError(std::string(name) + " must lie in [0, 1], got " + std::to_string(v));
  }
}

// First `count` entries of a uniformly shuffled 0..n-1 (partial Fisher-Yates).
std::vector<std::size_t> choose_without_replacement(std::size_t n, std::size_t count, Rng& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  count = std::min(count, n);
  for (std::size_t i = 0; i < count; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(count);
  std::sort(idx.begin(), idx.end());
  return idx;
}

std::vector<std::size_t> select_blocks(std::size_t k, double pbm, Rng& rng) {
  const auto count = static_cast<std::size_t>(std::llround(pbm * static_cast<double>(k)));
  return choose_without_replacement(k, count, rng);
}

std::size_t block_count(const FlaggedSeries& s, std::size_t block_size) {
  s.check_shape();
  if (block_size == 0 || s.size() % block_size != 0) {
    throw ConfigError("series length " + std::to_string(s.size()) +
                      " is not a multiple of block size " + std::to_string(block_size));
  }
  return s.size() / block_size;
}

}  // namespace

Mechanism parse_mechanism(std::string_view name) {
  if (name == "mcar" || name == "MCAR") return Mechanism::kMcar;
  if (name == "mar" || name == "MAR") return Mechanism::kMar;
  if (name == "mnar" || name == "MNAR") return Mechanism::kMnar;
  throw ConfigError("unknown missingness mechanism '" + std::string(name) + "'");
}

std::string_view to_string(Mechanism mechanism) {
  switch (mechanism) {
    case Mechanism::kMcar: return "MCAR";
    case Mechanism::kMar: return "MAR";
    case Mechanism::kMnar: return "MNAR";
  }
  return "?";
}

void MissingnessSpec::validate() const {
  if (mechanism == Mechanism::kMar) {
    if (!(apm > 0.0 && apm < 1.0)) {
      throw ConfigError("apm must lie in (0, 1), got " + std::to_string(apm));
    }
    if (!(mar_spread > 0.0) || !std::isfinite(mar_spread)) {
      throw ConfigError("mar_spread must be > 0");
    }
  } else {
    require_unit(pbm, "pbm");
    require_unit(pm, "pm");
  }
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double mar_probability(std::size_t i, std::size_t n, double centre, double spread) {
  const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
  return normal_cdf((u - centre) / spread);
}

double calibrate_mar(double apm, double spread, std::size_t n) {
  if (!(apm > 0.0 && apm < 1.0)) throw ConfigError("apm must lie in (0, 1)");
  if (!(spread > 0.0)) throw ConfigError("mar_spread must be > 0");
  if (n == 0) throw ConfigError("MAR calibration needs a non-empty series");

  auto mean_prob = [&](double c) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += mar_probability(i, n, c, spread);
    return s / static_cast<double>(n);
  };
  double lo = -5.0;  // mean near 1
  double hi = 6.0;   // mean near 0
  const double m_lo = mean_prob(lo);
  const double m_hi = mean_prob(hi);
  if (!(m_hi < apm && apm < m_lo)) {
    throw ConfigError("apm " + std::to_string(apm) + " unreachable with spread " +
                      std::to_string(spread) + " (range " + std::to_string(m_hi) + " .. " +
                      std::to_string(m_lo) + ")");
  }
  for (int iter = 0; iter < 200 && hi - lo > 1e-15; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double m = mean_prob(mid);
    if (std::abs(m - apm) < 1e-12) return mid;
    (m > apm ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

FlaggedSeries apply_mcar(const FlaggedSeries& complete, std::size_t block_size,
                         const MissingnessSpec& spec, Rng& rng) {
  spec.validate();
  const std::size_t k = block_count(complete, block_size);
  FlaggedSeries out = complete;
  if (spec.pm == 0.0 || spec.pbm == 0.0) return out;
  std::bernoulli_distribution drop(spec.pm);
  for (std::size_t j : select_blocks(k, spec.pbm, rng)) {
    const std::size_t start = j * block_size;
    if (spec.deterministic_counts) {
      const auto c = static_cast<std::size_t>(std::llround(spec.pm * static_cast<double>(block_size)));
      for (std::size_t i : choose_without_replacement(block_size, c, rng)) out.observed[start + i] = false;
    } else {
      for (std::size_t i = start; i < start + block_size; ++i) {
        if (drop(rng)) out.observed[i] = false;
      }
    }
  }
  return out;
}

FlaggedSeries apply_mar(const FlaggedSeries& complete, const MissingnessSpec& spec, Rng& rng) {
  spec.validate();
  complete.check_shape();
  FlaggedSeries out = complete;
  const std::size_t n = complete.size();
  if (n == 0) return out;
  const double centre = calibrate_mar(spec.apm, spec.mar_spread, n);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (unif(rng) < mar_probability(i, n, centre, spec.mar_spread)) out.observed[i] = false;
  }
  return out;
}

FlaggedSeries apply_mnar(const FlaggedSeries& complete, std::size_t block_size,
                         const MissingnessSpec& spec, Rng& rng) {
  spec.validate();
  const std::size_t k = block_count(complete, block_size);
  FlaggedSeries out = complete;
  if (spec.pbm == 0.0) return out;
  std::binomial_distribution<std::size_t> count_dist(block_size, spec.pm);
  std::vector<std::size_t> order;
  for (std::size_t j : select_blocks(k, spec.pbm, rng)) {
    const std::size_t start = j * block_size;
    const std::size_t c =
        spec.deterministic_counts
            ? static_cast<std::size_t>(std::llround(spec.pm * static_cast<double>(block_size)))
            : count_dist(rng);
    order.clear();
    for (std::size_t i = start; i < start + block_size; ++i) {
      if (out.observed[i]) order.push_back(i);
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return complete.values[a] > complete.values[b];
    });
    for (std::size_t r = 0; r < std::min(c, order.size()); ++r) out.observed[order[r]] = false;
  }
  return out;
}

FlaggedSeries apply_missingness(const FlaggedSeries& complete, std::size_t block_size,
                                const MissingnessSpec& spec, Rng& rng) {
  switch (spec.mechanism) {
    case Mechanism::kMcar: return apply_mcar(complete, block_size, spec, rng);
    case Mechanism::kMar: return apply_mar(complete, spec, rng);
    case Mechanism::kMnar: return apply_mnar(complete, block_size, spec, rng);
  }
  throw ConfigError("unknown mechanism");
}

}  // namespace gevmiss
