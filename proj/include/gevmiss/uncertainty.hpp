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

#include <cstdint>
#include <vector>

#include "gevmiss/estimation.hpp"

namespace gevmiss {

struct BootstrapConfig {
  std::size_t replicates = 1000;  // B
  std::size_t min_k = 4;          // minimum distinct pairs per resample
  bool enforce_min_k = true;
  std::uint64_t seed = 1;
  std::vector<double> return_periods = {20.0, 50.0, 100.0};
  unsigned threads = 0;  // 0: default_thread_count()

  void validate() const;
};

struct ReturnLevelEstimate {
  double period = 0.0;
  double level = 0.0;
  double se = 0.0;
  std::size_t replicates_used = 0;
};

struct BootstrapResult {
  FitReport point_fit;
  std::vector<ReturnLevelEstimate> levels;
  std::size_t failed_replicates = 0;
};

// Point estimate from the full data, standard errors from refits on B
// resamples of the (maximum, weight) pairs drawn with replacement. Failed or
// divergent refits are dropped and counted; fewer than 10% successes throws
// NumericalError.
BootstrapResult bootstrap_return_levels(const WeightedMaxima& data, FitMethod method,
                                        const BootstrapConfig& config);

}  // namespace gevmiss
