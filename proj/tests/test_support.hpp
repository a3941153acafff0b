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

#include <cmath>
#include <random>
#include <vector>

namespace gevmiss::testing {

// Inverse GEV CDF, written out independently of the library.
inline double reference_gev_quantile(double mu, double sigma, double xi, double p) {
  const double y = -std::log(p);
  if (xi == 0.0) return mu - sigma * std::log(y);
  return mu + sigma / xi * (std::pow(y, -xi) - 1.0);
}

inline std::vector<double> gev_sample(double mu, double sigma, double xi, std::size_t n,
                                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> out(n);
  for (double& x : out) {
    double p = 0.0;
    while (p <= 0.0) p = u(rng);
    x = reference_gev_quantile(mu, sigma, xi, p);
  }
  return out;
}

}  // namespace gevmiss::testing
