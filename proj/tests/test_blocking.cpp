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

#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <numeric>
#include <random>

#include "gevmiss/errors.hpp"

namespace gevmiss {
namespace {

using std::chrono::hours;

Timestamp at(int y, unsigned m, unsigned d, int hour = 0) {
  return std::chrono::sys_days{std::chrono::year{y} / m / d} + hours{hour};
}

FlaggedSeries hourly(std::size_t count, Timestamp start) {
  FlaggedSeries s;
  for (std::size_t i = 0; i < count; ++i) {
    s.values.push_back(static_cast<double>(i % 97));
    s.observed.push_back(true);
    s.timestamps.push_back(start + hours{static_cast<long>(i)});
  }
  return s;
}

TEST(PartitionFixed, TwoCompleteBlocks) {
  std::vector<double> v(10);
  std::iota(v.begin(), v.end(), 1.0);
  const auto blocks = partition_fixed(FlaggedSeries::fully_observed(v), 5);
  ASSERT_EQ(blocks.size(), 2u);
  EXPECT_EQ(blocks[0].n_obs, 5u);
  EXPECT_EQ(blocks[0].n_miss, 0u);
  EXPECT_EQ(blocks[0].observed_max, 5.0);
  EXPECT_EQ(blocks[1].observed_max, 10.0);
}

TEST(PartitionFixed, FullyMissingBlockHasNoMaximum) {
  auto s = FlaggedSeries::fully_observed({1, 2, 3, 4, 5, 6});
  s.observed[3] = s.observed[4] = s.observed[5] = false;
  const auto blocks = partition_fixed(s, 3);
  EXPECT_EQ(blocks[1].n_obs, 0u);
  EXPECT_EQ(blocks[1].n_miss, 3u);
  EXPECT_FALSE(blocks[1].observed_max.has_value());
}

TEST(PartitionFixed, RejectsUnevenLength) {
  EXPECT_THROW(partition_fixed(FlaggedSeries::fully_observed({1, 2, 3}), 2), ConfigError);
  EXPECT_THROW(partition_fixed(FlaggedSeries::fully_observed({1, 2}), 0), ConfigError);
}

TEST(PartitionFixed, SeventyFiveDrawsInFiveBlocks) {
  std::mt19937_64 rng(3);
  std::exponential_distribution<double> e(0.2);
  std::vector<double> v(75);
  for (double& x : v) x = e(rng);
  const auto blocks = partition_fixed(FlaggedSeries::fully_observed(v), 15);
  ASSERT_EQ(blocks.size(), 5u);
  std::size_t total = 0;
  for (const auto& b : blocks) total += b.expected_count();
  EXPECT_EQ(total, 75u);
}

TEST(PartitionFixed, CountsAndMaximaMatchBruteForce) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> z;
  std::bernoulli_distribution keep(0.7);
  for (int trial = 0; trial < 50; ++trial) {
    FlaggedSeries s;
    for (int i = 0; i < 240; ++i) {
      s.values.push_back(z(rng));
      s.observed.push_back(keep(rng));
    }
    const std::size_t n = 24;
    const auto blocks = partition_fixed(s, n);
    std::size_t total_obs = 0;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      std::optional<double> mx;
      std::size_t obs = 0;
      for (std::size_t i = b * n; i < (b + 1) * n; ++i) {
        if (!s.observed[i]) continue;
        ++obs;
        mx = mx ? std::max(*mx, s.values[i]) : s.values[i];
      }
      ASSERT_EQ(blocks[b].n_obs, obs);
      ASSERT_EQ(blocks[b].observed_max, mx);
      total_obs += blocks[b].n_obs;
    }
    ASSERT_EQ(total_obs, s.count_observed());
  }
}

TEST(PartitionFixed, FlagsDroppedEqualsFullyObserved) {
  std::vector<double> v = {3, 1, 4, 1, 5, 9, 2, 6, 5};
  FlaggedSeries flagged = FlaggedSeries::fully_observed(v);
  const auto a = partition_fixed(flagged, 3);
  const auto truth = true_block_maxima(flagged, 3);
  ASSERT_EQ(truth, (std::vector<double>{4, 9, 6}));
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(*a[i].observed_max, truth[i]);
}

TEST(PartitionCalendar, CountsAbsentHoursAsMissing) {
  const auto s = hourly(8000, at(2001, 1, 1));
  const auto blocks = partition_calendar(s);
  ASSERT_EQ(blocks.size(), 1u);
  EXPECT_EQ(blocks[0].year, 2001);
  EXPECT_EQ(blocks[0].n_obs, 8000u);
  EXPECT_EQ(blocks[0].n_miss, 760u);
}

TEST(PartitionCalendar, LeapYearFullyObserved) {
  const auto s = hourly(8784, at(2004, 1, 1));
  const auto blocks = partition_calendar(s);
  ASSERT_EQ(blocks.size(), 1u);
  EXPECT_EQ(blocks[0].n_miss, 0u);
  EXPECT_EQ(hours_in_year(2004), 8784u);
  EXPECT_EQ(hours_in_year(1900), 8760u);
  EXPECT_EQ(hours_in_year(2000), 8784u);
}

TEST(PartitionCalendar, FlaggedEntriesCountAsMissing) {
  auto s = hourly(8760, at(2001, 1, 1));
  for (std::size_t i = 0; i < 100; ++i) s.observed[i] = false;
  const auto blocks = partition_calendar(s);
  EXPECT_EQ(blocks[0].n_obs, 8660u);
  EXPECT_EQ(blocks[0].n_miss, 100u);
  EXPECT_NEAR(blocks[0].missing_fraction(), 100.0 / 8760.0, 1e-15);
}

TEST(PartitionCalendar, YearWithoutObservations) {
  FlaggedSeries s;
  s.values = {1.0, 2.0, 3.0};
  s.observed = {true, false, true};
  s.timestamps = {at(2001, 6, 1), at(2002, 6, 1), at(2003, 6, 1)};
  const auto blocks = partition_calendar(s);
  ASSERT_EQ(blocks.size(), 3u);
  EXPECT_EQ(blocks[1].year, 2002);
  EXPECT_EQ(blocks[1].n_obs, 0u);
  EXPECT_FALSE(blocks[1].observed_max.has_value());
  EXPECT_EQ(blocks[1].n_miss, 8760u);
}

TEST(PartitionCalendar, RejectsDuplicateTimestamps) {
  FlaggedSeries s;
  s.values = {1.0, 2.0};
  s.observed = {true, true};
  s.timestamps = {at(2001, 1, 1, 3), at(2001, 1, 1, 3)};
  EXPECT_THROW(partition_calendar(s), DataError);
  s.timestamps = {at(2001, 1, 1, 4), at(2001, 1, 1, 3)};
  EXPECT_THROW(partition_calendar(s), DataError);
}

TEST(PartitionCalendar, RequiresTimestamps) {
  EXPECT_THROW(partition_calendar(FlaggedSeries::fully_observed({1, 2})), DataError);
}

}  // namespace
}  // namespace gevmiss
