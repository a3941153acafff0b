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

#include <gtest/gtest.h>

#include "gevmiss/errors.hpp"
#include "test_support.hpp"

namespace gevmiss {
namespace {

BootstrapConfig quick(std::uint64_t seed, std::size_t b = 200) {
  BootstrapConfig c;
  c.replicates = b;
  c.seed = seed;
  c.threads = 2;
  return c;
}

TEST(Bootstrap, SameSeedSameEstimates) {
  const auto data = WeightedMaxima::unit(testing::gev_sample(1, 0.3, 0.05, 80, 5));
  const auto a = bootstrap_return_levels(data, FitMethod::kMle, quick(11));
  const auto b = bootstrap_return_levels(data, FitMethod::kMle, quick(11));
  ASSERT_EQ(a.levels.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(a.levels[i].se, b.levels[i].se);
    EXPECT_EQ(a.levels[i].level, b.levels[i].level);
  }
}

TEST(Bootstrap, ThreadCountDoesNotChangeResult) {
  const auto data = WeightedMaxima::unit(testing::gev_sample(1, 0.3, 0.05, 60, 6));
  BootstrapConfig c = quick(3, 100);
  c.threads = 1;
  const auto a = bootstrap_return_levels(data, FitMethod::kPwm, c);
  c.threads = 3;
  const auto b = bootstrap_return_levels(data, FitMethod::kPwm, c);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(a.levels[i].se, b.levels[i].se);
}

TEST(Bootstrap, PointEstimateIndependentOfConfig) {
  const auto data = WeightedMaxima::unit(testing::gev_sample(1, 0.3, 0.05, 60, 7));
  const auto a = bootstrap_return_levels(data, FitMethod::kMle, quick(1, 50));
  const auto b = bootstrap_return_levels(data, FitMethod::kMle, quick(2, 120));
  EXPECT_EQ(a.point_fit.params, b.point_fit.params);
  EXPECT_EQ(a.levels[2].level, return_level(fit_mle(data).params, 100));
}

TEST(Bootstrap, SeGrowsWithReturnPeriod) {
  int ordered = 0;
  for (std::uint64_t run = 0; run < 20; ++run) {
    const auto data = WeightedMaxima::unit(testing::gev_sample(1, 0.3, 0.05, 80, 100 + run));
    const auto r = bootstrap_return_levels(data, FitMethod::kMle, quick(run, 300));
    EXPECT_GT(r.levels[0].se, 0.0);
    if (r.levels[2].se >= r.levels[0].se) ++ordered;
  }
  EXPECT_GE(ordered, 19);
}

TEST(Bootstrap, WeightsTravelWithMaxima) {
  const auto x = testing::gev_sample(0, 1, 0.1, 50, 8);
  std::vector<WeightedMaxima::Pair> pairs;
  for (std::size_t i = 0; i < x.size(); ++i) pairs.push_back({x[i], i % 2 ? 0.6 : 1.0});
  const WeightedMaxima data(pairs);
  const auto r = bootstrap_return_levels(data, FitMethod::kPwm, quick(4, 100));
  EXPECT_EQ(r.point_fit.params, fit_pwm(data).params);
  EXPECT_GT(r.levels[1].se, 0.0);
}

TEST(Bootstrap, IdenticalMaximaFail) {
  const auto data = WeightedMaxima::unit(std::vector<double>(20, 3.0));
  EXPECT_THROW(bootstrap_return_levels(data, FitMethod::kMle, quick(1, 50)), NumericalError);
  EXPECT_THROW(bootstrap_return_levels(data, FitMethod::kPwm, quick(1, 50)), NumericalError);
}

TEST(Bootstrap, TooFewBlocks) {
  const auto data = WeightedMaxima::unit(std::vector<double>{1, 2, 3});
  EXPECT_THROW(bootstrap_return_levels(data, FitMethod::kMle, quick(1, 50)), DataError);
}

TEST(BootstrapConfig, Validation) {
  BootstrapConfig c;
  c.replicates = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = BootstrapConfig{};
  c.return_periods = {0.5};
  EXPECT_THROW(c.validate(), ConfigError);
}

}  // namespace
}  // namespace gevmiss
