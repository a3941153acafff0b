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

#include <chrono>
#include <cstddef>
#include <optional>
#include <vector>

namespace gevmiss {

using Timestamp = std::chrono::sys_seconds;

// A series with an observed/missing flag per entry. Values at missing entries
// are kept when known (simulation ground truth) and NaN otherwise.
struct FlaggedSeries {
  std::vector<double> values;
  std::vector<bool> observed;
  std::vector<Timestamp> timestamps;  // empty, or one per entry

  std::size_t size() const { return values.size(); }
  bool has_timestamps() const { return !timestamps.empty(); }
  std::size_t count_observed() const;

  // Throws DataError on mismatched lengths.
  void check_shape() const;

  static FlaggedSeries fully_observed(std::vector<double> values);
};

struct BlockSummary {
  std::size_t index = 0;
  std::size_t n_obs = 0;
  std::size_t n_miss = 0;
  std::optional<double> observed_max;
  std::optional<int> year;  // calendar blocks only

  std::size_t expected_count() const { return n_obs + n_miss; }
  double missing_fraction() const;
};

// k = N / n consecutive blocks of n entries. N must be a multiple of n.
std::vector<BlockSummary> partition_fixed(const FlaggedSeries& series, std::size_t block_size);

// One block per calendar year spanned by the timestamps. The expected count is
// the number of hours in the year; an hour counts as observed when at least
// one observed entry falls in it, so absent rows count as missing.
std::vector<BlockSummary> partition_calendar(const FlaggedSeries& series);

// Maxima of each fixed block ignoring the flags (the ground truth in simulation).
std::vector<double> true_block_maxima(const FlaggedSeries& series, std::size_t block_size);

std::size_t hours_in_year(int year);

}  // namespace gevmiss
