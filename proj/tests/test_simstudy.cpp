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

#include "gevmiss/simstudy.hpp"

#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <sstream>

#include "gevmiss/errors.hpp"

namespace gevmiss {
namespace {

TEST(DrawParent, ExponentialMean) {
  ParentDistribution p;
  p.family = ParentFamily::kExponential;
  Rng rng = make_stream(1, 0);
  const auto x = draw_parent(p, 1'000'000, rng);
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= x.size();
  EXPECT_LT(std::abs(mean - 5.0), 4 * 5.0 / 1e3);
}

TEST(DrawParent, StudentTVariance) {
  ParentDistribution p;
  p.family = ParentFamily::kStudentT;
  p.df = 5;
  Rng rng = make_stream(2, 0);
  const auto x = draw_parent(p, 1'000'000, rng);
  double s2 = 0.0;
  for (double v : x) s2 += v * v;
  // Heavy fourth moment for df=5; allow 5% on the variance.
  EXPECT_NEAR(s2 / x.size(), 5.0 / 3.0, 0.05 * 5.0 / 3.0);
}

TEST(DrawParent, BetaInUnitInterval) {
  ParentDistribution p;
  p.family = ParentFamily::kBeta;
  p.a = 0.5;
  p.b = 3;
  Rng rng = make_stream(3, 0);
  for (double v : draw_parent(p, 100000, rng)) {
    ASSERT_GT(v, 0.0);
    ASSERT_LT(v, 1.0);
  }
  p.a = -1;
  EXPECT_THROW(p.validate(), ConfigError);
}

TEST(PercentileGrid, FortyNinePoints) {
  const auto g = percentile_grid();
  ASSERT_EQ(g.size(), 49u);
  EXPECT_DOUBLE_EQ(g.front(), 0.02);
  EXPECT_DOUBLE_EQ(g.back(), 0.98);
  EXPECT_THROW(percentile_grid(0.0), ConfigError);
}

TEST(CvmDistance, ZeroForIdenticalFits) {
  const auto g = percentile_grid();
  EXPECT_EQ(cvm_distance({1, 2, 0.1}, {1, 2, 0.1}, g), 0.0);
  EXPECT_GT(cvm_distance({1, 2, 0.1}, {1, 2, 0.11}, g), 0.0);
  EXPECT_THROW(cvm_distance({1, -2, 0.1}, {1, 2, 0.1}, g), DomainError);
}

TEST(CvmDistance, GumbelShiftAgainstIndependentOracles) {
  const auto g = percentile_grid();
  const GevParams ref{0, 1, 0}, fit{0.1, 1, 0};
  const double grid_value = cvm_distance(ref, fit, g);
  // 50-digit evaluation of the 49-point mean.
  EXPECT_NEAR(grid_value, 7.54796520941798e-4, 1e-15);
  // Asymmetric: the grid follows the reference.
  EXPECT_NEAR(cvm_distance(fit, ref, g), 7.54763397303359e-4, 1e-15);
  EXPECT_NE(cvm_distance(fit, ref, g), grid_value);

  // Exact integral of (Fhat - F)^2 dF, in the probability scale.
  auto gap2 = [](double u) {
    const double x = -std::log(-std::log(u));
    const double fhat = std::exp(-std::exp(-(x - 0.1)));
    return (fhat - u) * (fhat - u);
  };
  const double exact =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(gap2, 0.0, 1.0, 15, 1e-14);
  EXPECT_NEAR(exact, 7.39713053408388e-4, 1e-12);

  Rng rng = make_stream(77, 0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double sum = 0.0, sum2 = 0.0;
  constexpr int kDraws = 1'000'000;
  for (int i = 0; i < kDraws; ++i) {
    double p = 0.0;
    while (p <= 0.0) p = u(rng);
    const double v = gap2(p);
    sum += v;
    sum2 += v * v;
  }
  const double mc = sum / kDraws;
  const double se = std::sqrt((sum2 / kDraws - mc * mc) / kDraws);
  EXPECT_LT(std::abs(mc - exact), 4 * se);
  // The 49-point mean sits 2.04% above the integral for this pair.
  EXPECT_NEAR(grid_value / exact - 1.0, 0.0204, 5e-4);
}

SimConfig small_config(Mechanism m, double pbm, double pm, double apm = 0) {
  SimConfig c;
  c.block_size = 50;
  c.blocks = 40;
  c.replications = 20;
  c.seed = 9;
  c.spec.mechanism = m;
  c.spec.pbm = pbm;
  c.spec.pm = pm;
  c.spec.apm = apm;
  c.threads = 2;
  return c;
}

TEST(RunReplication, NoMissingnessCollapsesWeightSchemes) {
  const SimConfig c = small_config(Mechanism::kMcar, 1.0, 0.0);
  for (std::uint64_t rep = 0; rep < 5; ++rep) {
    const auto r = run_replication(c, rep);
    ASSERT_TRUE(r.reference_ok);
    EXPECT_EQ(r.fitted[0], r.fitted[1]);
    EXPECT_EQ(r.fitted[0], r.fitted[2]);
    EXPECT_EQ(r.fitted[3], r.fitted[4]);
    EXPECT_EQ(r.fitted[3], r.fitted[5]);
    // The observed MLE is the reference fit itself.
    EXPECT_EQ(r.fitted[0], r.reference);
    EXPECT_EQ(r.distance[0], 0.0);
  }
}

TEST(RunReplication, DeterministicPerIndex) {
  const SimConfig c = small_config(Mechanism::kMnar, 0.5, 0.3);
  const auto a = run_replication(c, 3);
  const auto b = run_replication(c, 3);
  EXPECT_EQ(a.distance, b.distance);
  EXPECT_NE(run_replication(c, 4).distance, a.distance);
}

TEST(RunCell, IndependentOfThreadCount) {
  SimConfig c = small_config(Mechanism::kMar, 0, 0, 0.25);
  c.threads = 1;
  const CvmRow one = run_cell(c);
  c.threads = 4;
  EXPECT_EQ(run_cell(c), one);
  EXPECT_FALSE(one.pbm.has_value());
  EXPECT_EQ(one.pm, 0.25);
}

TEST(RunCell, MeanOfReplications) {
  const SimConfig c = small_config(Mechanism::kMnar, 0.5, 0.3);
  const CvmRow row = run_cell(c);
  for (std::size_t m = 0; m < kMethodCount; ++m) {
    double sum = 0.0;
    std::size_t ok = 0;
    for (std::uint64_t rep = 0; rep < c.replications; ++rep) {
      const auto r = run_replication(c, rep);
      if (r.reference_ok && r.ok[m]) {
        sum += r.distance[m];
        ++ok;
      }
    }
    EXPECT_NEAR(row.mean[m], sum / ok, 1e-15);
    EXPECT_EQ(row.failures[m], c.replications - ok);
  }
}

TEST(ExpandGrid, OrderAndCount) {
  StudyGrid g;
  g.base = small_config(Mechanism::kMnar, 0, 0);
  g.blocks = {25, 50, 100};
  g.block_sizes = {100};
  g.pbm = {0.2, 0.5, 0.8};
  g.pm = {0.1, 0.2, 0.35};
  const auto cells = expand_grid(g);
  ASSERT_EQ(cells.size(), 27u);
  EXPECT_EQ(cells[0].blocks, 25u);
  EXPECT_EQ(cells[1].blocks, 50u);
  EXPECT_EQ(cells[3].spec.pbm, 0.5);
  EXPECT_EQ(cells[9].spec.pm, 0.2);
  g.pm.clear();
  EXPECT_TRUE(expand_grid(g).empty());
  EXPECT_TRUE(run_study(g).empty());
}

TEST(ExpandGrid, MarUsesApmOnly) {
  StudyGrid g;
  g.base = small_config(Mechanism::kMar, 0, 0);
  g.blocks = {25, 50};
  g.block_sizes = {100};
  g.apm = {0.1, 0.25};
  const auto cells = expand_grid(g);
  ASSERT_EQ(cells.size(), 4u);
  EXPECT_EQ(cells[2].spec.apm, 0.25);
}

TEST(CvmCsv, HeaderAndRoundTrip) {
  StudyGrid g;
  g.base = small_config(Mechanism::kMnar, 0, 0);
  g.base.replications = 5;
  g.blocks = {30};
  g.block_sizes = {40};
  g.pbm = {0.5};
  g.pm = {0.2, 0.3};
  const auto rows = run_study(g);
  std::ostringstream os;
  write_cvm_csv(os, rows);
  const std::string text = os.str();
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "sims,pbm,pm,n,mechanism,mle_obs,mle_uncond,mle_cond,mom_obs,mom_uncond,mom_cond,"
            "replications,failures_mle_obs,failures_mle_uncond,failures_mle_cond,"
            "failures_mom_obs,failures_mom_uncond,failures_mom_cond");
  std::istringstream is(text);
  const auto back = read_cvm_csv(is);
  EXPECT_EQ(back, rows);
  std::ostringstream again;
  write_cvm_csv(again, back);
  EXPECT_EQ(again.str(), text);
}

TEST(SimConfig, Validation) {
  SimConfig c = small_config(Mechanism::kMcar, 0.5, 0.5);
  c.blocks = 2;
  EXPECT_THROW(c.validate(), ConfigError);
  c = small_config(Mechanism::kMcar, 0.5, 0.5);
  c.replications = 0;
  EXPECT_THROW(c.validate(), ConfigError);
}

}  // namespace
}  // namespace gevmiss
