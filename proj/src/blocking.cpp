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

#include "gevmiss/blocking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gevmiss/errors.hpp"

namespace gevmiss {

std::size_t FlaggedSeries::count_observed() const {
  return static_cast<std::size_t>(std::count(observed.begin(), observed.end(), true));
}

void FlaggedSeries::check_shape() const {
  if (observed.size() != values.size()) {
    throw DataError("series has " + std::to_string(values.size()) + " values but " +
                    std::to_string(observed.size()) + " flags");
  }
  if (!timestamps.empty() && timestamps.size() != values.size()) {
    throw DataError("series has " + std::to_string(values.size()) + " values but " +
                    std::to_string(timestamps.size()) + " timestamps");
  }
}

FlaggedSeries FlaggedSeries::fully_observed(std::vector<double> values) {
  FlaggedSeries s;
  s.observed.assign(values.size(), true);
  s.values = std::move(values);
  return s;
}

double BlockSummary::missing_fraction() const {
  const auto total = expected_count();
  return total == 0 ? 1.0 : static_cast<double>(n_miss) / static_cast<double>(total);
}

std::vector<BlockSummary> partition_fixed(const FlaggedSeries& series, std::size_t block_size) {
  series.check_shape();
  if (block_size == 0) throw ConfigError("block size must be >= 1");
  if (series.size() % block_size != 0) {
    throw ConfigError("series length " + std::to_string(series.size()) +
                      " is not a multiple of block size " + std::to_string(block_size));
  }
  const std::size_t k = series.size() / block_size;
  std::vector<BlockSummary> out(k);
  for (std::size_t j = 0; j < k; ++j) {
    BlockSummary& b = out[j];
    b.index = j;
    for (std::size_t i = j * block_size; i < (j + 1) * block_size; ++i) {
      if (!series.observed[i]) {
        ++b.n_miss;
        continue;
      }
      ++b.n_obs;
      const double v = series.values[i];
      if (!b.observed_max || v > *b.observed_max) b.observed_max = v;
    }
  }
  return out;
}

std::size_t hours_in_year(int year) {
  return std::chrono::year{year}.is_leap() ? 8784 : 8760;
}

std::vector<BlockSummary> partition_calendar(const FlaggedSeries& series) {
  using namespace std::chrono;
  series.check_shape();
  if (!series.has_timestamps()) throw DataError("calendar blocking requires timestamps");
  if (series.size() == 0) return {};

  for (std::size_t i = 1; i < series.size(); ++i) {
    if (series.timestamps[i] == series.timestamps[i - 1]) {
      throw DataError("duplicate timestamp at entry " + std::to_string(i));
    }
    if (series.timestamps[i] < series.timestamps[i - 1]) {
      throw DataError("timestamps not increasing at entry " + std::to_string(i));
    }
  }

  auto year_of = [](Timestamp t) {
    return static_cast<int>(year_month_day{floor<days>(t)}.year());
  };
  const int first_year = year_of(series.timestamps.front());
  const int last_year = year_of(series.timestamps.back());

  std::vector<BlockSummary> out(static_cast<std::size_t>(last_year - first_year + 1));
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j].index = j;
    out[j].year = first_year + static_cast<int>(j);
  }

  // Count distinct observed hours; timestamps are sorted so equal hours are adjacent.
  std::optional<sys_time<hours>> last_hour;
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (!series.observed[i]) continue;
    BlockSummary& b = out[static_cast<std::size_t>(year_of(series.timestamps[i]) - first_year)];
    const auto hour = floor<hours>(series.timestamps[i]);
    if (!last_hour || *last_hour != hour) ++b.n_obs;
    last_hour = hour;
    const double v = series.values[i];
    if (!b.observed_max || v > *b.observed_max) b.observed_max = v;
  }
  for (BlockSummary& b : out) {
    const std::size_t expected = hours_in_year(*b.year);
    b.n_obs = std::min(b.n_obs, expected);
    b.n_miss = expected - b.n_obs;
  }
  return out;
}

std::vector<double> true_block_maxima(const FlaggedSeries& series, std::size_t block_size) {
  if (block_size == 0 || series.size() % block_size != 0) {
    throw ConfigError("series length is not a multiple of block size");
  }
  std::vector<double> out;
  out.reserve(series.size() / block_size);
  for (std::size_t start = 0; start < series.size(); start += block_size) {
    const auto first = series.values.begin() + static_cast<std::ptrdiff_t>(start);
    out.push_back(*std::max_element(first, first + static_cast<std::ptrdiff_t>(block_size)));
  }
  return out;
}

}  // namespace gevmiss
