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

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "gevmiss/blocking.hpp"
#include "gevmiss/csv.hpp"
#include "gevmiss/errors.hpp"
#include "gevmiss/estimation.hpp"
#include "gevmiss/weights.hpp"

namespace gevmiss {

void ParentDistribution::validate() const {
  switch (family) {
    case ParentFamily::kExponential:
      if (!(rate > 0.0) || !std::isfinite(rate)) throw ConfigError("exponential rate must be > 0");
      break;
    case ParentFamily::kStudentT:
      if (!(df > 0.0) || !std::isfinite(df)) throw ConfigError("student t df must be > 0");
      break;
    case ParentFamily::kBeta:
      if (!(a > 0.0 && b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
        throw ConfigError("beta shape parameters must be > 0");
      }
      break;
  }
}

std::string ParentDistribution::describe() const {
  switch (family) {
    case ParentFamily::kExponential: return "exponential(rate=" + csv::format_double(rate) + ")";
    case ParentFamily::kStudentT: return "student_t(df=" + csv::format_double(df) + ")";
    case ParentFamily::kBeta:
      return "beta(a=" + csv::format_double(a) + ",b=" + csv::format_double(b) + ")";
  }
  return "?";
}

ParentFamily parse_parent_family(std::string_view name) {
  if (name == "exponential") return ParentFamily::kExponential;
  if (name == "student_t" || name == "t") return ParentFamily::kStudentT;
  if (name == "beta") return ParentFamily::kBeta;
  throw ConfigError("unknown parent distribution '" + std::string(name) + "'");
}

std::vector<double> draw_parent(const ParentDistribution& parent, std::size_t count, Rng& rng) {
  parent.validate();
  std::vector<double> out(count);
  switch (parent.family) {
    case ParentFamily::kExponential: {
      std::exponential_distribution<double> d(parent.rate);
      for (double& v : out) v = d(rng);
      break;
    }
    case ParentFamily::kStudentT: {
      std::student_t_distribution<double> d(parent.df);
      for (double& v : out) v = d(rng);
      break;
    }
    case ParentFamily::kBeta: {
      // X / (X + Y) with X ~ Gamma(a), Y ~ Gamma(b); redraw the rare endpoint values.
      std::gamma_distribution<double> ga(parent.a, 1.0);
      std::gamma_distribution<double> gb(parent.b, 1.0);
      for (double& v : out) {
        do {
          const double x = ga(rng);
          const double y = gb(rng);
          v = x / (x + y);
        } while (!(v > 0.0 && v < 1.0));
      }
      break;
    }
  }
  return out;
}

std::vector<double> percentile_grid(double step) {
  if (!(step > 0.0 && step < 0.5)) throw ConfigError("percentile step must lie in (0, 0.5)");
  const auto count = static_cast<std::size_t>(std::llround(1.0 / step)) - 1;
  std::vector<double> grid;
  grid.reserve(count);
  for (std::size_t i = 1; i <= count; ++i) {
    const double p = static_cast<double>(i) * step;
    if (p > 0.0 && p < 1.0) grid.push_back(p);
  }
  return grid;
}

double cvm_distance(const GevParams& reference, const GevParams& fitted,
                    std::span<const double> grid) {
  validate(reference);
  validate(fitted);
  if (grid.empty()) throw DomainError("cvm_distance: empty grid");
  double sum = 0.0;
  for (double p : grid) {
    const double x = gev_quantile(reference, p);
    const double d = gev_cdf(fitted, x) - gev_cdf(reference, x);
    sum += d * d;
  }
  return sum / static_cast<double>(grid.size());
}

void SimConfig::validate() const {
  parent.validate();
  spec.validate();
  if (block_size == 0) throw ConfigError("block size must be positive");
  if (blocks < 3) throw ConfigError("need at least 3 blocks");
  if (replications == 0) throw ConfigError("replications must be positive");
  percentile_grid(cvm_step);
}

ReplicationResult run_replication(const SimConfig& config, std::uint64_t rep_index) {
  config.validate();
  ReplicationResult out;
  Rng rng = make_stream(config.seed, rep_index);
  const std::size_t n = config.block_size;
  const FlaggedSeries complete =
      FlaggedSeries::fully_observed(draw_parent(config.parent, config.blocks * n, rng));

  const std::vector<double> truth = true_block_maxima(complete, n);
  try {
    const FitReport ref = fit_mle(WeightedMaxima::unit(truth));
    if (!ref.converged) return out;
    out.reference = ref.params;
    out.reference_ok = true;
  } catch (const std::exception&) {
    return out;
  }

  const FlaggedSeries flagged = apply_missingness(complete, n, config.spec, rng);
  const std::vector<BlockSummary> blocks = partition_fixed(flagged, n);
  if (flagged.count_observed() == 0) return out;
  const EmpiricalCdf ecdf = EmpiricalCdf::from_series(flagged);
  const std::vector<double> grid = percentile_grid(config.cvm_step);

  constexpr std::array<WeightScheme, 3> kSchemes = {
      WeightScheme::kObserved, WeightScheme::kUnconditional, WeightScheme::kConditional};
  for (std::size_t s = 0; s < kSchemes.size(); ++s) {
    WeightedMaxima data;
    try {
      data = WeightedMaxima::from_blocks(blocks, weigh_blocks(blocks, kSchemes[s], &ecdf));
    } catch (const std::exception&) {
      continue;
    }
    for (std::size_t m = 0; m < 2; ++m) {
      const std::size_t cell = m * 3 + s;
      try {
        const FitReport r = fit(data, m == 0 ? FitMethod::kMle : FitMethod::kPwm);
        if (!r.converged) continue;
        out.fitted[cell] = r.params;
        out.distance[cell] = cvm_distance(out.reference, r.params, grid);
        out.ok[cell] = true;
      } catch (const std::exception&) {
      }
    }
  }
  return out;
}

CvmRow run_cell(const SimConfig& config) {
  config.validate();
  std::vector<ReplicationResult> results(config.replications);
  const unsigned threads = config.threads == 0 ? default_thread_count() : config.threads;
  parallel_for(results.size(), threads,
               [&](std::size_t i) { results[i] = run_replication(config, i); });

  CvmRow row;
  row.sims = config.blocks;
  row.n = config.block_size;
  row.mechanism = config.spec.mechanism;
  if (config.spec.mechanism == Mechanism::kMar) {
    row.pm = config.spec.apm;
  } else {
    row.pbm = config.spec.pbm;
    row.pm = config.spec.pm;
  }
  row.replications = results.size();
  // Kahan sums in replication order keep the mean independent of scheduling.
  std::array<double, kMethodCount> sum{};
  std::array<double, kMethodCount> comp{};
  std::array<std::size_t, kMethodCount> used{};
  for (const ReplicationResult& r : results) {
    for (std::size_t m = 0; m < kMethodCount; ++m) {
      if (!r.reference_ok || !r.ok[m]) {
        ++row.failures[m];
        continue;
      }
      const double y = r.distance[m] - comp[m];
      const double t = sum[m] + y;
      comp[m] = (t - sum[m]) - y;
      sum[m] = t;
      ++used[m];
    }
  }
  for (std::size_t m = 0; m < kMethodCount; ++m) {
    row.mean[m] = used[m] ? sum[m] / static_cast<double>(used[m]) : NAN;
  }
  return row;
}

std::vector<SimConfig> expand_grid(const StudyGrid& grid) {
  std::vector<SimConfig> cells;
  const bool mar = grid.base.spec.mechanism == Mechanism::kMar;
  for (std::size_t n : grid.block_sizes) {
    if (mar) {
      for (double apm : grid.apm) {
        for (std::size_t k : grid.blocks) {
          SimConfig c = grid.base;
          c.block_size = n;
          c.blocks = k;
          c.spec.apm = apm;
          cells.push_back(c);
        }
      }
      continue;
    }
    for (double pm : grid.pm) {
      for (double pbm : grid.pbm) {
        for (std::size_t k : grid.blocks) {
          SimConfig c = grid.base;
          c.block_size = n;
          c.blocks = k;
          c.spec.pbm = pbm;
          c.spec.pm = pm;
          cells.push_back(c);
        }
      }
    }
  }
  return cells;
}

std::vector<CvmRow> run_study(const StudyGrid& grid) {
  std::vector<CvmRow> rows;
  for (const SimConfig& cell : expand_grid(grid)) rows.push_back(run_cell(cell));
  return rows;
}

namespace {

const std::vector<std::string>& cvm_header() {
  static const std::vector<std::string> header = [] {
    std::vector<std::string> h = {"sims", "pbm", "pm", "n", "mechanism"};
    for (auto name : kMethodNames) h.emplace_back(name);
    h.emplace_back("replications");
    for (auto name : kMethodNames) h.push_back("failures_" + std::string(name));
    return h;
  }();
  return header;
}

std::size_t parse_count(const std::string& field, std::size_t line) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(field, &pos);
    if (pos != field.size()) throw std::invalid_argument(field);
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw DataError("line " + std::to_string(line) + ": bad integer '" + field + "'");
  }
}

double parse_real(const std::string& field, std::size_t line) {
  double v = 0.0;
  if (field == "nan") return NAN;
  if (!csv::parse_double(field, v)) {
    throw DataError("line " + std::to_string(line) + ": bad number '" + field + "'");
  }
  return v;
}

}  // namespace

void write_cvm_csv(std::ostream& os, std::span<const CvmRow> rows) {
  os << csv::join(cvm_header()) << '\n';
  for (const CvmRow& r : rows) {
    std::vector<std::string> f;
    f.push_back(std::to_string(r.sims));
    f.push_back(r.pbm ? csv::format_double(*r.pbm) : "");
    f.push_back(csv::format_double(r.pm));
    f.push_back(std::to_string(r.n));
    f.emplace_back(to_string(r.mechanism));
    for (double m : r.mean) f.push_back(csv::format_double(m));
    f.push_back(std::to_string(r.replications));
    for (std::size_t c : r.failures) f.push_back(std::to_string(c));
    os << csv::join(f) << '\n';
  }
}

std::vector<CvmRow> read_cvm_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw DataError("empty CvM table");
  if (csv::split(line) != cvm_header()) throw DataError("line 1: unexpected CvM table header");
  std::vector<CvmRow> rows;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto f = csv::split(line);
    if (f.size() != cvm_header().size()) {
      throw DataError("line " + std::to_string(line_no) + ": expected " +
                      std::to_string(cvm_header().size()) + " fields");
    }
    CvmRow r;
    std::size_t i = 0;
    r.sims = parse_count(f[i++], line_no);
    if (!f[i].empty()) r.pbm = parse_real(f[i], line_no);
    ++i;
    r.pm = parse_real(f[i++], line_no);
    r.n = parse_count(f[i++], line_no);
    r.mechanism = parse_mechanism(f[i++]);
    for (double& m : r.mean) m = parse_real(f[i++], line_no);
    r.replications = parse_count(f[i++], line_no);
    for (std::size_t& c : r.failures) c = parse_count(f[i++], line_no);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace gevmiss
