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

#include "gevmiss/surge.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "gevmiss/errors.hpp"

namespace gevmiss {
namespace {

using std::chrono::hours;

Timestamp start_of(int y) { return std::chrono::sys_days{std::chrono::year{y} / 1 / 1}; }

double tide_value(double t_hours) {
  const double d2r = std::numbers::pi / 180.0;
  return 0.5 + 1.2 * std::cos(d2r * (28.9841042 * t_hours - 35.0)) +
         0.4 * std::cos(d2r * (15.0410686 * t_hours - 210.0));
}

FlaggedSeries synthetic_year(int year, double gap_fraction, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution gap(gap_fraction);
  FlaggedSeries s;
  const std::size_t n = hours_in_year(year);
  for (std::size_t h = 0; h < n; ++h) {
    s.values.push_back(tide_value(static_cast<double>(h)));
    s.observed.push_back(!gap(rng));
    s.timestamps.push_back(start_of(year) + hours{static_cast<long>(h)});
  }
  return s;
}

TEST(Timestamps, ParseAndFormat) {
  const auto t = parse_timestamp("2001-03-04 05:06:07");
  ASSERT_TRUE(t.has_value());
  EXPECT_EQ(format_timestamp(*t), "2001-03-04 05:06:07");
  EXPECT_EQ(parse_timestamp("2001-03-04T05:06Z"), parse_timestamp("2001/03/04 05:06:00"));
  EXPECT_FALSE(parse_timestamp("2001-13-04 05:06").has_value());
  EXPECT_FALSE(parse_timestamp("yesterday").has_value());
}

TEST(IngestCsv, WellFormedRows) {
  std::istringstream in(
      "timestamp,level\n2001-01-01 00:00,1.5\n2001-01-01 01:00,2.5\n2001-01-01 02:00,0.5\n");
  const auto s = ingest_csv(in);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s.count_observed(), 3u);
  EXPECT_EQ(s.values[1], 2.5);
}

TEST(IngestCsv, EmptyFieldIsMissing) {
  std::istringstream in("timestamp,level\n2001-01-01 00:00,\n2001-01-01 01:00,NA\n"
                        "2001-01-01 02:00,3\n");
  const auto s = ingest_csv(in);
  EXPECT_FALSE(s.observed[0]);
  EXPECT_FALSE(s.observed[1]);
  EXPECT_TRUE(s.observed[2]);
}

TEST(IngestCsv, FlagColumn) {
  std::istringstream in("time,h,ok\n2001-01-01 00:00,1,1\n2001-01-01 01:00,2,0\n");
  CsvLayout layout;
  layout.time_column = "time";
  layout.value_column = "h";
  layout.flag_column = "ok";
  const auto s = ingest_csv(in, layout);
  EXPECT_TRUE(s.observed[0]);
  EXPECT_FALSE(s.observed[1]);
}

TEST(IngestCsv, DuplicateTimestampNamesLine) {
  std::istringstream in("timestamp,level\n2001-01-01 00:00,1\n2001-01-01 00:00,2\n");
  try {
    ingest_csv(in);
    FAIL() << "expected a data error";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(IngestCsv, MalformedInput) {
  std::istringstream no_col("time,level\n2001-01-01 00:00,1\n");
  EXPECT_THROW(ingest_csv(no_col), DataError);
  std::istringstream bad_num("timestamp,level\n2001-01-01 00:00,abc\n");
  EXPECT_THROW(ingest_csv(bad_num), DataError);
  std::istringstream bad_time("timestamp,level\nnoon,1\n");
  EXPECT_THROW(ingest_csv(bad_time), DataError);
}

TEST(Constituents, ParseOverrides) {
  const auto d = default_constituents();
  ASSERT_EQ(d.size(), 5u);
  EXPECT_EQ(d[0].name, "M2");
  const auto c = parse_constituents("M2, K1,X3:42.5");
  ASSERT_EQ(c.size(), 3u);
  EXPECT_DOUBLE_EQ(c[1].speed, 15.0410686);
  EXPECT_EQ(c[2].name, "X3");
  EXPECT_DOUBLE_EQ(c[2].speed, 42.5);
  EXPECT_TRUE(parse_constituents("none").empty());
  EXPECT_THROW(parse_constituents("ZZ9"), ConfigError);
}

TEST(FitTide, NoiselessTwoConstituentsExact) {
  const auto s = synthetic_year(2001, 0.0, 1);
  const auto model = fit_tide(s, parse_constituents("M2,K1"), MeanModel::kConstant);
  EXPECT_NEAR(model.intercept, 0.5, 1e-9);
  EXPECT_NEAR(model.constituents[0].amplitude, 1.2, 1e-9);
  EXPECT_NEAR(model.constituents[0].phase, 35.0, 1e-7);
  EXPECT_NEAR(model.constituents[1].amplitude, 0.4, 1e-9);
  EXPECT_NEAR(model.constituents[1].phase, 210.0, 1e-7);
  const auto surge = detide(s, model);
  for (std::size_t i = 0; i < s.size(); ++i) ASSERT_LT(std::abs(surge.residuals.values[i]), 1e-9);
}

TEST(FitTide, NoisyAmplitudesWithinStandardErrors) {
  auto s = synthetic_year(2003, 0.0, 2);
  std::mt19937_64 rng(12);
  std::normal_distribution<double> noise(0.0, 0.01);
  for (double& v : s.values) v += noise(rng);
  const auto model = fit_tide(s, parse_constituents("M2,K1"), MeanModel::kConstant);
  // Amplitude SE for a sinusoid fit: sd * sqrt(2 / N).
  const double se = 0.01 * std::sqrt(2.0 / s.size());
  EXPECT_LT(std::abs(model.constituents[0].amplitude - 1.2), 4 * se);
  EXPECT_LT(std::abs(model.constituents[1].amplitude - 0.4), 4 * se);
}

TEST(FitTide, ZeroConstituentsGivesMean) {
  auto s = synthetic_year(2001, 0.3, 3);
  const auto model = fit_tide(s, {}, MeanModel::kConstant);
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.observed[i]) {
      sum += s.values[i];
      ++n;
    }
  }
  EXPECT_NEAR(model.intercept, sum / n, 1e-12);
}

TEST(FitTide, YearlyAndLinearMeans) {
  FlaggedSeries s;
  for (std::size_t h = 0; h < 2 * 8760; ++h) {
    s.values.push_back(tide_value(static_cast<double>(h)) + (h >= 8760 ? 0.25 : 0.0));
    s.observed.push_back(h % 7 != 0);
    s.timestamps.push_back(start_of(2001) + hours{static_cast<long>(h)});
  }
  const auto yearly = fit_tide(s, parse_constituents("M2,K1"), MeanModel::kYearly);
  EXPECT_NEAR(yearly.yearly_means.at(2001), 0.5, 1e-9);
  EXPECT_NEAR(yearly.yearly_means.at(2002), 0.75, 1e-9);
  const auto linear = fit_tide(s, parse_constituents("M2,K1"), MeanModel::kLinear);
  EXPECT_GT(linear.slope_per_hour, 0.0);
}

TEST(FitTide, RankDeficientDesign) {
  FlaggedSeries s;
  for (int h = 0; h < 48; ++h) {
    s.values.push_back(std::sin(h * 0.3));
    s.observed.push_back(true);
    s.timestamps.push_back(start_of(2001) + hours{h});
  }
  EXPECT_THROW(fit_tide(s, parse_constituents("M2,X:28.9841042"), MeanModel::kConstant),
               NumericalError);
  EXPECT_THROW(fit_tide(FlaggedSeries::fully_observed({1, 2, 3}), {}, MeanModel::kConstant),
               DataError);
}

TEST(Detide, PreservesMissingPattern) {
  const auto s = synthetic_year(2004, 0.2, 6);
  const auto model = fit_tide(s, parse_constituents("M2,K1"), MeanModel::kYearly);
  const auto surge = detide(s, model);
  EXPECT_EQ(surge.residuals.observed, s.observed);
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!s.observed[i]) {
      ASSERT_TRUE(std::isnan(surge.residuals.values[i]));
    }
  }
  const auto a = partition_calendar(s);
  const auto b = partition_calendar(surge.residuals);
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a[0].n_obs, b[0].n_obs);
  EXPECT_EQ(a[0].n_miss, b[0].n_miss);
  EXPECT_NEAR(b[0].missing_fraction(),
              1.0 - static_cast<double>(s.count_observed()) / hours_in_year(2004), 1e-15);
}

TEST(SurgeCsv, RoundTrip) {
  const auto s = synthetic_year(2001, 0.1, 7);
  const auto surge = detide(s, fit_tide(s, default_constituents(), MeanModel::kYearly));
  std::ostringstream os;
  write_surge_csv(os, surge);
  std::istringstream is(os.str());
  const auto back = read_surge_csv(is);
  std::ostringstream again;
  write_surge_csv(again, back);
  EXPECT_EQ(again.str(), os.str());
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "timestamp,level,residual,observed");
}

}  // namespace
}  // namespace gevmiss
