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

#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

namespace {

void add_layout_options(CLI::App* app, gevmiss::CsvLayout& layout) {
  app->add_option("--time-column", layout.time_column, "Timestamp column name")
      ->capture_default_str();
  app->add_option("--value-column", layout.value_column, "Value column name")
      ->capture_default_str();
  app->add_option("--flag-column", layout.flag_column,
                  "Optional observed-flag column (1 observed, 0 missing)");
  app->add_option("--missing", layout.missing_sentinels, "Tokens treated as missing values");
}

void add_input_options(CLI::App* app, gevmiss::cli::InputOptions& in) {
  app->add_option("-i,--input", in.input, "Input CSV")->required()->check(CLI::ExistingFile);
  app->add_option("--block-size", in.block_size,
                  "Fixed block length in observations; 0 uses calendar years")
      ->capture_default_str();
  add_layout_options(app, in.layout);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace gevmiss::cli;

  CLI::App app{"Block-maxima GEV estimation with missing data"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  std::optional<std::uint64_t> seed;
  app.add_option("--seed", seed, "Master seed for all random streams");

  SimulateOptions sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Run a missingness simulation study");
  sim_cmd->add_option("-c,--config", sim.config, "Study configuration file")
      ->required()
      ->check(CLI::ExistingFile);
  sim_cmd->add_option("-o,--out", sim.out, "Output CSV of mean CvM distances")->required();
  sim_cmd->add_option("--threads", sim.threads, "Worker threads (0: automatic)");

  FitOptions fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a GEV to weighted block maxima");
  add_input_options(fit_cmd, fit.input);
  fit_cmd->add_option("-m,--method", fit.method, "mle or pwm")->capture_default_str();
  fit_cmd->add_option("-w,--weights", fit.weights, "observed, unconditional or conditional")
      ->capture_default_str();
  fit_cmd->add_option("-o,--out", fit.out, "Output CSV of fitted parameters")->required();
  fit_cmd->add_option("--weights-out", fit.weights_out, "Optional per-block weights CSV");

  ReturnLevelOptions rl;
  auto* rl_cmd = app.add_subcommand("return-levels", "Return levels with bootstrap errors");
  add_input_options(rl_cmd, rl.input);
  rl_cmd->add_option("-m,--method", rl.method, "mle, pwm or all")->capture_default_str();
  rl_cmd->add_option("-w,--weights", rl.weights, "observed, unconditional, conditional or all")
      ->delimiter(',');
  rl_cmd->add_option("--filter", rl.filters, "all, complete, complete10")->delimiter(',');
  rl_cmd->add_option("-T,--periods", rl.periods, "Return periods in blocks")->delimiter(',');
  rl_cmd->add_option("-B,--bootstrap", rl.bootstrap, "Bootstrap replicates")
      ->capture_default_str();
  rl_cmd->add_option("--min-k", rl.min_k, "Minimum distinct blocks per resample")
      ->capture_default_str();
  rl_cmd->add_option("-o,--out", rl.out, "Output CSV")->required();
  rl_cmd->add_option("--threads", rl.threads, "Worker threads (0: automatic)");

  DetideOptions dt;
  auto* dt_cmd = app.add_subcommand("detide", "Remove the astronomical tide from a level series");
  dt_cmd->add_option("-i,--input", dt.input, "Input CSV")->required()->check(CLI::ExistingFile);
  add_layout_options(dt_cmd, dt.layout);
  dt_cmd->add_option("--constituents", dt.constituents,
                     "Comma-separated constituents, name:speed, or none")
      ->capture_default_str();
  dt_cmd->add_option("--mean-model", dt.mean_model, "constant, yearly or linear")
      ->capture_default_str();
  dt_cmd->add_option("-o,--out", dt.out, "Output surge CSV")->required();
  dt_cmd->add_option("--model-out", dt.model_out, "Optional fitted tide model CSV");

  DemoOptions demo;
  auto* demo_cmd =
      app.add_subcommand("demo-missingness", "Write illustrative MCAR/MAR/MNAR series");
  demo_cmd->add_option("-o,--out-dir", demo.out_dir, "Output directory")->required();
  demo_cmd->add_option("--draws", demo.draws)->capture_default_str();
  demo_cmd->add_option("--block-size", demo.block_size)->capture_default_str();
  demo_cmd->add_option("--rate", demo.rate)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  return run_guarded(
      [&]() -> int {
        if (*sim_cmd) {
          sim.seed = seed;
          return cmd_simulate(sim, std::cerr);
        }
        if (*fit_cmd) {
          fit.seed = seed;
          return cmd_fit(fit, std::cerr);
        }
        if (*rl_cmd) {
          rl.seed = seed;
          return cmd_return_levels(rl, std::cerr);
        }
        if (*dt_cmd) {
          dt.seed = seed;
          return cmd_detide(dt, std::cerr);
        }
        demo.seed = seed;
        return cmd_demo_missingness(demo, std::cerr);
      },
      std::cerr);
}
