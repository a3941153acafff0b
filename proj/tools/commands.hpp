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

// Subcommand implementations for the gevmiss command-line tool. Each command
// throws the library's typed errors; run_guarded maps them to exit codes.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gevmiss/simstudy.hpp"
#include "gevmiss/surge.hpp"

namespace gevmiss::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitNumerical = 4;

inline constexpr const char* kVersion = "0.3.0";

// Runs `body`, printing any error to `err` and returning its exit code.
int run_guarded(const std::function<int()>& body, std::ostream& err);

// Flat "key = value" configuration for simulation sweeps. List-valued keys take
// comma-separated values. '#' starts a comment.
StudyGrid parse_sim_config(std::istream& in, std::optional<std::uint64_t>& seed);

struct SimulateOptions {
  std::filesystem::path config;
  std::filesystem::path out;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
};
int cmd_simulate(const SimulateOptions& opts, std::ostream& log);

struct InputOptions {
  std::filesystem::path input;
  CsvLayout layout;
  std::size_t block_size = 0;  // 0: calendar-year blocks
};

struct FitOptions {
  InputOptions input;
  std::string method = "mle";
  std::string weights = "observed";
  std::filesystem::path out;
  std::filesystem::path weights_out;  // optional per-block weights CSV
  std::optional<std::uint64_t> seed;
};
int cmd_fit(const FitOptions& opts, std::ostream& log);

struct ReturnLevelOptions {
  InputOptions input;
  std::string method = "all";                 // mle, pwm or all
  std::vector<std::string> weights = {"all"};  // observed, unconditional, conditional or all
  std::vector<std::string> filters = {"all"};  // all, complete, complete10
  std::vector<double> periods = {20.0, 50.0, 100.0};
  std::size_t bootstrap = 1000;
  std::size_t min_k = 4;
  std::filesystem::path out;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
};
int cmd_return_levels(const ReturnLevelOptions& opts, std::ostream& log);

struct DetideOptions {
  std::filesystem::path input;
  CsvLayout layout;
  std::string constituents = "M2,S2,N2,K1,O1";
  std::string mean_model = "yearly";
  std::filesystem::path out;
  std::filesystem::path model_out;
  std::optional<std::uint64_t> seed;
};
int cmd_detide(const DetideOptions& opts, std::ostream& log);

struct DemoOptions {
  std::filesystem::path out_dir;
  std::optional<std::uint64_t> seed;
  std::size_t draws = 75;
  std::size_t block_size = 15;
  double rate = 0.2;
  double mcar_probability = 0.3;
  double mar_apm = 0.3;
  double mnar_top_fraction = 0.25;
};
int cmd_demo_missingness(const DemoOptions& opts, std::ostream& log);

}  // namespace gevmiss::cli
