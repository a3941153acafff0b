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

#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "gevmiss/blocking.hpp"
#include "gevmiss/csv.hpp"
#include "gevmiss/errors.hpp"
#include "gevmiss/estimation.hpp"
#include "gevmiss/missingness.hpp"
#include "gevmiss/uncertainty.hpp"
#include "gevmiss/weights.hpp"
#include "json.hpp"

namespace gevmiss::cli {

namespace {

using nlohmann::json;

std::string now_string() {
  return format_timestamp(
      std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now()));
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed, std::ostream& log) {
  if (seed) return *seed;
  std::random_device rd;
  const std::uint64_t drawn = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  log << "no --seed given; using seed " << drawn << '\n';
  return drawn;
}

// Reproducibility record written next to the primary output.
class RunManifest {
 public:
  RunManifest(std::string subcommand, std::uint64_t seed)
      : doc_{{"subcommand", std::move(subcommand)},
             {"version", kVersion},
             {"seed", seed},
             {"start_time", now_string()},
             {"config", json::object()},
             {"outputs", json::array()}} {}

  json& config() { return doc_["config"]; }
  void add_output(const std::filesystem::path& p) { doc_["outputs"].push_back(p.string()); }

  void write(const std::filesystem::path& path) {
    doc_["end_time"] = now_string();
    std::ofstream out(path);
    if (!out) throw DataError("cannot write manifest " + path.string());
    out << doc_.dump(2) << '\n';
  }

 private:
  json doc_;
};

std::filesystem::path manifest_path(const std::filesystem::path& out) {
  return std::filesystem::path(out.string() + ".manifest.json");
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.empty()) throw ConfigError("an output path is required");
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<double> parse_real_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  if (trim(value).empty()) return out;
  for (const std::string& item : csv::split(value)) {
    double v = 0.0;
    if (!csv::parse_double(item, v)) throw ConfigError(key + ": bad number '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<std::size_t> parse_count_list(const std::string& key, const std::string& value) {
  std::vector<std::size_t> out;
  for (double v : parse_real_list(key, value)) {
    if (!(v >= 1.0) || v != std::floor(v)) {
      throw ConfigError(key + ": expected positive integers");
    }
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

double parse_real(const std::string& key, const std::string& value) {
  double v = 0.0;
  if (!csv::parse_double(value, v)) throw ConfigError(key + ": bad number '" + value + "'");
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError(key + ": expected true or false");
}

struct LoadedBlocks {
  FlaggedSeries series;
  std::vector<BlockSummary> blocks;
};

LoadedBlocks load_blocks(const InputOptions& in, std::ostream& log) {
  LoadedBlocks lb;
  lb.series = ingest_csv(in.input, in.layout);
  if (lb.series.count_observed() == 0) throw DataError(in.input.string() + ": no observed values");
  if (in.block_size > 0) {
    lb.blocks = partition_fixed(lb.series, in.block_size);
  } else {
    lb.blocks = partition_calendar(lb.series);
  }
  const auto empty = std::count_if(lb.blocks.begin(), lb.blocks.end(),
                                   [](const BlockSummary& b) { return b.n_obs == 0; });
  if (empty > 0) log << "excluding " << empty << " block(s) with no observations\n";
  return lb;
}

std::string label_for(FitMethod method, WeightScheme scheme, const std::string& filter) {
  std::string label = method == FitMethod::kMle ? "MLE" : "MoM";
  const bool weighted = scheme != WeightScheme::kObserved;
  if (filter == "all") {
    switch (scheme) {
      case WeightScheme::kObserved: return label + "-Obs";
      case WeightScheme::kUnconditional: return label + "-Uncond";
      case WeightScheme::kConditional: return label + "-Cond";
    }
  }
  label += filter == "complete" ? "-Complete" : "-Complete10";
  if (weighted) label += scheme == WeightScheme::kUnconditional ? "-Uncond" : "-Cond";
  return label;
}

bool passes_filter(const BlockSummary& b, const std::string& filter) {
  if (filter == "all") return true;
  if (filter == "complete") return b.n_miss == 0;
  if (filter == "complete10") return b.missing_fraction() < 0.10;
  throw ConfigError("unknown block filter '" + filter + "' (all, complete, complete10)");
}

std::vector<WeightScheme> expand_schemes(const std::vector<std::string>& names) {
  std::vector<WeightScheme> out;
  for (const std::string& n : names) {
    if (n == "all") {
      out = {WeightScheme::kObserved, WeightScheme::kUnconditional, WeightScheme::kConditional};
      return out;
    }
    out.push_back(parse_weight_scheme(n));
  }
  return out;
}

std::vector<FitMethod> expand_methods(const std::string& name) {
  if (name == "all") return {FitMethod::kMle, FitMethod::kPwm};
  return {parse_fit_method(name)};
}

}  // namespace

int run_guarded(const std::function<int()>& body, std::ostream& err) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const DomainError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}

StudyGrid parse_sim_config(std::istream& in, std::optional<std::uint64_t>& seed) {
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (kv.count(key)) {
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    kv[key] = trim(line.substr(eq + 1));
  }

  static const std::vector<std::string> kKnown = {
      "parent", "rate",  "df",         "beta_a", "beta_b",     "mechanism",
      "blocks", "block_size", "pbm",   "pm",     "apm",        "mar_spread",
      "deterministic_counts", "replications", "seed", "cvm_step", "threads"};
  for (const auto& [key, value] : kv) {
    if (std::find(kKnown.begin(), kKnown.end(), key) == kKnown.end()) {
      throw ConfigError("unknown configuration key '" + key + "'");
    }
  }

  StudyGrid grid;
  SimConfig& base = grid.base;
  auto get = [&](const std::string& key) -> const std::string* {
    const auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };
  if (auto v = get("parent")) base.parent.family = parse_parent_family(*v);
  if (auto v = get("rate")) base.parent.rate = parse_real("rate", *v);
  if (auto v = get("df")) base.parent.df = parse_real("df", *v);
  if (auto v = get("beta_a")) base.parent.a = parse_real("beta_a", *v);
  if (auto v = get("beta_b")) base.parent.b = parse_real("beta_b", *v);
  const std::string* mech = get("mechanism");
  if (!mech) throw ConfigError("missing required key 'mechanism'");
  base.spec.mechanism = parse_mechanism(*mech);
  if (auto v = get("mar_spread")) base.spec.mar_spread = parse_real("mar_spread", *v);
  if (auto v = get("deterministic_counts")) {
    base.spec.deterministic_counts = parse_bool("deterministic_counts", *v);
  }
  if (auto v = get("replications")) {
    const auto r = parse_count_list("replications", *v);
    if (r.size() != 1) throw ConfigError("replications: expected one positive integer");
    base.replications = r.front();
  }
  if (auto v = get("seed")) {
    try {
      std::size_t pos = 0;
      const auto s = std::stoull(*v, &pos);
      if (pos != v->size()) throw std::invalid_argument(*v);
      seed = s;
    } catch (const std::exception&) {
      throw ConfigError("seed: expected a non-negative integer");
    }
  }
  if (auto v = get("cvm_step")) base.cvm_step = parse_real("cvm_step", *v);
  if (auto v = get("threads")) {
    const auto t = parse_count_list("threads", *v);
    if (t.size() != 1) throw ConfigError("threads: expected one positive integer");
    base.threads = static_cast<unsigned>(t.front());
  }

  auto list_or = [&](const std::string& key, std::vector<std::size_t> fallback) {
    const std::string* v = get(key);
    return v ? parse_count_list(key, *v) : fallback;
  };
  grid.blocks = list_or("blocks", {25, 50, 75, 100});
  grid.block_sizes = list_or("block_size", {100});
  auto required_reals = [&](const std::string& key) {
    const std::string* v = get(key);
    if (!v) throw ConfigError("mechanism " + std::string(to_string(base.spec.mechanism)) +
                              " requires key '" + key + "'");
    return parse_real_list(key, *v);
  };
  if (base.spec.mechanism == Mechanism::kMar) {
    grid.apm = required_reals("apm");
  } else {
    grid.pbm = required_reals("pbm");
    grid.pm = required_reals("pm");
  }

  base.parent.validate();
  for (double p : grid.pbm) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("pbm values must lie in [0, 1]");
  }
  for (double p : grid.pm) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("pm values must lie in [0, 1]");
  }
  for (double p : grid.apm) {
    if (!(p > 0.0 && p < 1.0)) throw ConfigError("apm values must lie in (0, 1)");
  }
  percentile_grid(base.cvm_step);
  return grid;
}

int cmd_simulate(const SimulateOptions& opts, std::ostream& log) {
  std::ifstream cfg(opts.config);
  if (!cfg) throw ConfigError("cannot read config " + opts.config.string());
  std::optional<std::uint64_t> config_seed;
  StudyGrid grid = parse_sim_config(cfg, config_seed);
  const std::uint64_t seed = resolve_seed(opts.seed ? opts.seed : config_seed, log);
  grid.base.seed = seed;
  if (opts.threads > 0) grid.base.threads = opts.threads;

  const auto cells = expand_grid(grid);
  log << "simulating " << cells.size() << " cell(s), " << grid.base.replications
      << " replications each\n";
  std::vector<CvmRow> rows;
  for (const SimConfig& cell : cells) rows.push_back(run_cell(cell));

  auto out = open_output(opts.out);
  write_cvm_csv(out, rows);

  RunManifest manifest("simulate", seed);
  json& c = manifest.config();
  c["config_file"] = opts.config.string();
  c["parent"] = grid.base.parent.describe();
  c["mechanism"] = std::string(to_string(grid.base.spec.mechanism));
  c["blocks"] = grid.blocks;
  c["block_size"] = grid.block_sizes;
  c["pbm"] = grid.pbm;
  c["pm"] = grid.pm;
  c["apm"] = grid.apm;
  c["mar_spread"] = grid.base.spec.mar_spread;
  c["deterministic_counts"] = grid.base.spec.deterministic_counts;
  c["replications"] = grid.base.replications;
  c["cvm_step"] = grid.base.cvm_step;
  manifest.add_output(opts.out);
  manifest.write(manifest_path(opts.out));
  return kExitOk;
}

int cmd_fit(const FitOptions& opts, std::ostream& log) {
  const FitMethod method = parse_fit_method(opts.method);
  const WeightScheme scheme = parse_weight_scheme(opts.weights);
  const LoadedBlocks lb = load_blocks(opts.input, log);
  const EmpiricalCdf ecdf = EmpiricalCdf::from_series(lb.series);
  const auto weights = weigh_blocks(lb.blocks, scheme, &ecdf);
  const WeightedMaxima data = WeightedMaxima::from_blocks(lb.blocks, weights);

  const FitReport report = fit(data, method);
  for (const std::string& w : report.warnings) log << "warning: " << w << '\n';

  auto out = open_output(opts.out);
  out << "method,weights,k,mu,sigma,xi,converged,loglik,iterations\n";
  out << to_string(method) << ',' << to_string(scheme) << ',' << data.size() << ','
      << csv::format_double(report.params.mu) << ',' << csv::format_double(report.params.sigma)
      << ',' << csv::format_double(report.params.xi) << ',' << (report.converged ? 1 : 0) << ','
      << csv::format_double(method == FitMethod::kMle ? report.objective
                                                      : weighted_loglik(report.params, data))
      << ',' << report.iterations << '\n';

  RunManifest manifest("fit", opts.seed.value_or(0));
  json& c = manifest.config();
  c["input"] = opts.input.input.string();
  c["block_size"] = opts.input.block_size;
  c["method"] = std::string(to_string(method));
  c["weights"] = std::string(to_string(scheme));
  manifest.add_output(opts.out);

  if (!opts.weights_out.empty()) {
    auto wout = open_output(opts.weights_out);
    wout << "block,year,n_obs,n_miss,observed_max,weight\n";
    for (const BlockWeight& bw : weights) {
      const BlockSummary& b = lb.blocks[bw.block];
      wout << b.index << ',' << (b.year ? std::to_string(*b.year) : "") << ',' << b.n_obs << ','
           << b.n_miss << ',' << csv::format_double(*b.observed_max) << ','
           << csv::format_double(bw.w) << '\n';
    }
    manifest.add_output(opts.weights_out);
  }
  manifest.write(manifest_path(opts.out));

  if (!report.converged) {
    log << "fit did not converge\n";
    return kExitNumerical;
  }
  return kExitOk;
}

int cmd_return_levels(const ReturnLevelOptions& opts, std::ostream& log) {
  const std::vector<FitMethod> methods = expand_methods(opts.method);
  const std::vector<WeightScheme> schemes = expand_schemes(opts.weights);
  std::vector<std::string> filters;
  for (const std::string& f : opts.filters) {
    if (f == "all" && opts.filters.size() == 1) {
      filters = {"all"};
    } else {
      passes_filter(BlockSummary{}, f);
      filters.push_back(f);
    }
  }
  const std::uint64_t seed = resolve_seed(opts.seed, log);
  const LoadedBlocks lb = load_blocks(opts.input, log);
  const EmpiricalCdf ecdf = EmpiricalCdf::from_series(lb.series);

  BootstrapConfig bcfg;
  bcfg.replicates = opts.bootstrap;
  bcfg.min_k = opts.min_k;
  bcfg.seed = seed;
  bcfg.return_periods = opts.periods;
  bcfg.threads = opts.threads;
  bcfg.validate();

  auto out = open_output(opts.out);
  out << "label,method,weights,filter,k";
  for (double t : opts.periods) out << ",level_" << csv::format_double(t);
  for (double t : opts.periods) out << ",se_" << csv::format_double(t);
  out << ",replicates_used,failed_replicates\n";

  for (const std::string& filter : filters) {
    for (const FitMethod method : methods) {
      for (const WeightScheme scheme : schemes) {
        const auto all_weights = weigh_blocks(lb.blocks, scheme, &ecdf);
        std::vector<BlockWeight> kept;
        for (const BlockWeight& bw : all_weights) {
          if (passes_filter(lb.blocks[bw.block], filter)) kept.push_back(bw);
        }
        if (kept.size() < std::max<std::size_t>(4, opts.min_k)) {
          throw DataError("filter '" + filter + "' leaves " + std::to_string(kept.size()) +
                          " block(s); at least " + std::to_string(std::max<std::size_t>(4, opts.min_k)) +
                          " blocks are required to fit and bootstrap");
        }
        const WeightedMaxima data = WeightedMaxima::from_blocks(lb.blocks, kept);
        const BootstrapResult res = bootstrap_return_levels(data, method, bcfg);
        out << label_for(method, scheme, filter) << ',' << to_string(method) << ','
            << to_string(scheme) << ',' << filter << ',' << data.size();
        for (const auto& e : res.levels) out << ',' << csv::format_double(e.level);
        for (const auto& e : res.levels) out << ',' << csv::format_double(e.se);
        out << ',' << res.levels.front().replicates_used << ',' << res.failed_replicates << '\n';
        if (res.failed_replicates > 0) {
          log << label_for(method, scheme, filter) << ": " << res.failed_replicates
              << " bootstrap refit(s) failed or diverged\n";
        }
      }
    }
  }

  RunManifest manifest("return-levels", seed);
  json& c = manifest.config();
  c["input"] = opts.input.input.string();
  c["block_size"] = opts.input.block_size;
  c["method"] = opts.method;
  c["weights"] = opts.weights;
  c["filters"] = filters;
  c["periods"] = opts.periods;
  c["bootstrap"] = opts.bootstrap;
  c["min_k"] = opts.min_k;
  manifest.add_output(opts.out);
  manifest.write(manifest_path(opts.out));
  return kExitOk;
}

int cmd_detide(const DetideOptions& opts, std::ostream& log) {
  const MeanModel mean_model = parse_mean_model(opts.mean_model);
  std::vector<Constituent> constituents = parse_constituents(opts.constituents);
  const FlaggedSeries series = ingest_csv(opts.input, opts.layout);
  const TideModel model = fit_tide(series, std::move(constituents), mean_model);
  const SurgeSeries surge = detide(series, model);

  auto out = open_output(opts.out);
  write_surge_csv(out, surge);
  RunManifest manifest("detide", opts.seed.value_or(0));
  json& c = manifest.config();
  c["input"] = opts.input.string();
  c["mean_model"] = std::string(to_string(mean_model));
  json cons = json::array();
  for (const Constituent& k : model.constituents) {
    cons.push_back({{"name", k.name}, {"speed", k.speed}, {"amplitude", k.amplitude},
                    {"phase", k.phase}});
  }
  c["constituents"] = cons;
  manifest.add_output(opts.out);
  if (!opts.model_out.empty()) {
    auto mout = open_output(opts.model_out);
    write_tide_model_csv(mout, model);
    manifest.add_output(opts.model_out);
  }
  manifest.write(manifest_path(opts.out));
  log << "detided " << series.count_observed() << " observed of " << series.size()
      << " entries\n";
  return kExitOk;
}

int cmd_demo_missingness(const DemoOptions& opts, std::ostream& log) {
  if (opts.out_dir.empty()) throw ConfigError("an output directory is required");
  if (opts.block_size == 0 || opts.draws % opts.block_size != 0) {
    throw ConfigError("draws must be a multiple of the block size");
  }
  const std::uint64_t seed = resolve_seed(opts.seed, log);
  std::filesystem::create_directories(opts.out_dir);

  Rng parent_rng = make_stream(seed, 0);
  ParentDistribution parent;
  parent.family = ParentFamily::kExponential;
  parent.rate = opts.rate;
  const FlaggedSeries complete =
      FlaggedSeries::fully_observed(draw_parent(parent, opts.draws, parent_rng));

  MissingnessSpec mcar;
  mcar.mechanism = Mechanism::kMcar;
  mcar.pbm = 1.0;
  mcar.pm = opts.mcar_probability;
  MissingnessSpec mar;
  mar.mechanism = Mechanism::kMar;
  mar.apm = opts.mar_apm;
  // Series-wide MNAR: one block spanning the series, top fraction removed.
  MissingnessSpec mnar;
  mnar.mechanism = Mechanism::kMnar;
  mnar.pbm = 1.0;
  mnar.pm = opts.mnar_top_fraction;
  mnar.deterministic_counts = true;

  Rng rng_mcar = make_stream(seed, 1);
  Rng rng_mar = make_stream(seed, 2);
  Rng rng_mnar = make_stream(seed, 3);
  const std::vector<std::pair<std::string, FlaggedSeries>> cases = {
      {"mcar", apply_mcar(complete, opts.block_size, mcar, rng_mcar)},
      {"mar", apply_mar(complete, mar, rng_mar)},
      {"mnar", apply_mnar(complete, complete.size(), mnar, rng_mnar)},
  };

  RunManifest manifest("demo-missingness", seed);
  json& c = manifest.config();
  c["draws"] = opts.draws;
  c["block_size"] = opts.block_size;
  c["rate"] = opts.rate;
  c["mcar_probability"] = opts.mcar_probability;
  c["mar_apm"] = opts.mar_apm;
  c["mar_spread"] = mar.mar_spread;
  c["mnar_top_fraction"] = opts.mnar_top_fraction;

  for (const auto& [name, flagged] : cases) {
    for (const bool observed_only : {false, true}) {
      const auto path = opts.out_dir / (name + (observed_only ? "_observed.csv" : "_complete.csv"));
      auto out = open_output(path);
      out << "index,block,value,observed\n";
      for (std::size_t i = 0; i < flagged.size(); ++i) {
        if (observed_only && !flagged.observed[i]) continue;
        out << i << ',' << i / opts.block_size << ',' << csv::format_double(flagged.values[i])
            << ',' << (flagged.observed[i] ? 1 : 0) << '\n';
      }
      manifest.add_output(path);
    }
    log << name << ": " << flagged.size() - flagged.count_observed() << " of " << flagged.size()
        << " missing\n";
  }
  manifest.write(opts.out_dir / "manifest.json");
  return kExitOk;
}

}  // namespace gevmiss::cli
