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

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gevmiss/distribution.hpp"
#include "gevmiss/missingness.hpp"
#include "gevmiss/rng.hpp"

namespace gevmiss {

enum class ParentFamily { kExponential, kStudentT, kBeta };

struct ParentDistribution {
  ParentFamily family = ParentFamily::kStudentT;
  double rate = 0.2;  // Exponential
  double df = 5.0;    // Student t
  double a = 2.0;     // Beta
  double b = 2.0;

  void validate() const;
  std::string describe() const;
};

ParentFamily parse_parent_family(std::string_view name);

std::vector<double> draw_parent(const ParentDistribution& parent, std::size_t count, Rng& rng);

// Percentile levels step, 2 step, ... up to 1 - step (49 points for step 0.02).
std::vector<double> percentile_grid(double step = 0.02);

// Mean of [fitted(x_i) - reference(x_i)]^2 over x_i = reference quantiles of `grid`.
double cvm_distance(const GevParams& reference, const GevParams& fitted,
                    std::span<const double> grid);

inline constexpr std::size_t kMethodCount = 6;
// Column order: mle_obs, mle_uncond, mle_cond, mom_obs, mom_uncond, mom_cond.
inline constexpr std::array<std::string_view, kMethodCount> kMethodNames = {
    "mle_obs", "mle_uncond", "mle_cond", "mom_obs", "mom_uncond", "mom_cond"};

struct SimConfig {
  ParentDistribution parent;
  std::size_t block_size = 100;  // n
  std::size_t blocks = 100;      // k
  MissingnessSpec spec;
  std::size_t replications = 1000;
  std::uint64_t seed = 1;
  double cvm_step = 0.02;
  unsigned threads = 0;  // 0: default_thread_count()

  void validate() const;
};

struct ReplicationResult {
  bool reference_ok = false;
  std::array<bool, kMethodCount> ok{};
  std::array<double, kMethodCount> distance{};
  GevParams reference;
  std::array<GevParams, kMethodCount> fitted{};
};

// One replication: parent draws, reference MLE on the true block maxima,
// missingness, then the six fits scored against the reference.
ReplicationResult run_replication(const SimConfig& config, std::uint64_t rep_index);

struct CvmRow {
  std::size_t sims = 0;  // number of blocks
  std::optional<double> pbm;  // blank for MAR
  double pm = 0.0;       // apm for MAR
  std::size_t n = 0;
  Mechanism mechanism = Mechanism::kMcar;
  std::array<double, kMethodCount> mean{};
  std::size_t replications = 0;
  std::array<std::size_t, kMethodCount> failures{};

  friend bool operator==(const CvmRow&, const CvmRow&) = default;
};

CvmRow run_cell(const SimConfig& config);

// Cartesian sweep definition. Every list must be non-empty for rows to be produced.
struct StudyGrid {
  SimConfig base;
  std::vector<std::size_t> blocks;
  std::vector<std::size_t> block_sizes;
  std::vector<double> pbm;
  std::vector<double> pm;
  std::vector<double> apm;
};

// Cells in table order (block size, then pm or apm, then pbm, then blocks fastest).
std::vector<SimConfig> expand_grid(const StudyGrid& grid);
std::vector<CvmRow> run_study(const StudyGrid& grid);

void write_cvm_csv(std::ostream& os, std::span<const CvmRow> rows);
std::vector<CvmRow> read_cvm_csv(std::istream& is);

}  // namespace gevmiss
