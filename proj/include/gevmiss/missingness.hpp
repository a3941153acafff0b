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

#include <cstddef>
#include <string_view>

#include "gevmiss/blocking.hpp"
#include "gevmiss/rng.hpp"

namespace gevmiss {

enum class Mechanism { kMcar, kMar, kMnar };

Mechanism parse_mechanism(std::string_view name);
std::string_view to_string(Mechanism mechanism);

struct MissingnessSpec {
  Mechanism mechanism = Mechanism::kMcar;
  double pbm = 0.0;          // proportion of blocks with missingness (MCAR, MNAR)
  double pm = 0.0;           // expected within-block missing proportion (MCAR, MNAR)
  double apm = 0.0;          // series-average missing proportion (MAR)
  double mar_spread = 0.2;   // MAR normal-CDF scale, in units of series length
  bool deterministic_counts = false;

  // Throws ConfigError on out-of-range parameters.
  void validate() const;
};

// Standard normal CDF.
double normal_cdf(double x);

// Deletion probability of the entry at 0-based position i of n under MAR:
// Phi(((i + 0.5) / n - centre) / spread).
double mar_probability(std::size_t i, std::size_t n, double centre, double spread);

// Centre c such that the mean MAR deletion probability over n entries is apm.
double calibrate_mar(double apm, double spread, std::size_t n);

// Each function returns a copy of `complete` with only the flags changed.
FlaggedSeries apply_mcar(const FlaggedSeries& complete, std::size_t block_size,
                         const MissingnessSpec& spec, Rng& rng);
FlaggedSeries apply_mar(const FlaggedSeries& complete, const MissingnessSpec& spec, Rng& rng);
FlaggedSeries apply_mnar(const FlaggedSeries& complete, std::size_t block_size,
                         const MissingnessSpec& spec, Rng& rng);

FlaggedSeries apply_missingness(const FlaggedSeries& complete, std::size_t block_size,
                                const MissingnessSpec& spec, Rng& rng);

}  // namespace gevmiss
