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

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gevmiss/blocking.hpp"

namespace gevmiss {

// ---- CSV ingestion -------------------------------------------------------

struct CsvLayout {
  std::string time_column = "timestamp";  // empty: no timestamps
  std::string value_column = "level";
  std::string flag_column;                // optional 0/1 observed column
  std::vector<std::string> missing_sentinels = {"", "NA", "NaN", "nan", "-99999"};
};

// Accepts "YYYY-MM-DD HH:MM[:SS]", the same with 'T' and an optional 'Z', and
// '/' as the date separator.
std::optional<Timestamp> parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp t);

// Rows become entries in file order. Unparseable or sentinel values are
// flagged missing. Throws DataError (with the line number) on a missing
// column, a bad timestamp, or a duplicate or decreasing timestamp.
FlaggedSeries ingest_csv(std::istream& in, const CsvLayout& layout = {});
FlaggedSeries ingest_csv(const std::filesystem::path& path, const CsvLayout& layout = {});

// ---- Harmonic tide model -------------------------------------------------
//
//   T(t) = M(t) + sum_n A_n cos(pi (omega_n t - psi_n) / 180)
//
// with t in hours since the first timestamp, omega_n in degrees per hour, and
// psi_n in degrees.

struct Constituent {
  std::string name;
  double speed = 0.0;      // degrees per hour
  double amplitude = 0.0;  // same units as the series
  double phase = 0.0;      // degrees in [0, 360)
};

enum class MeanModel { kConstant, kYearly, kLinear };
MeanModel parse_mean_model(std::string_view name);
std::string_view to_string(MeanModel model);

// M2, S2, N2, K1, O1 with zero amplitude.
std::vector<Constituent> default_constituents();

// Comma-separated list of known names (M2, S2, N2, K2, K1, O1, P1, Q1, M4, MSF,
// MM, SA, SSA) or name:speed pairs for anything else.
std::vector<Constituent> parse_constituents(std::string_view spec);

struct TideModel {
  MeanModel mean_model = MeanModel::kYearly;
  Timestamp origin{};
  std::map<int, double> yearly_means;  // kYearly
  double intercept = 0.0;              // kConstant, kLinear
  double slope_per_hour = 0.0;         // kLinear
  std::vector<Constituent> constituents;

  double hours_since_origin(Timestamp t) const;
  // NaN for a year without a fitted mean.
  double mean_level(Timestamp t) const;
  double predict(Timestamp t) const;
};

// Ordinary least squares on the observed entries. Throws NumericalError when the
// design is numerically rank deficient and DataError when there are too few
// observations.
TideModel fit_tide(const FlaggedSeries& series, std::vector<Constituent> constituents,
                   MeanModel mean_model);

struct SurgeSeries {
  FlaggedSeries residuals;    // observed - T(t) where observed, NaN elsewhere
  std::vector<double> levels; // original values
};

SurgeSeries detide(const FlaggedSeries& series, const TideModel& model);

// Columns: timestamp,level,residual,observed.
void write_surge_csv(std::ostream& out, const SurgeSeries& surge);
SurgeSeries read_surge_csv(std::istream& in);

void write_tide_model_csv(std::ostream& out, const TideModel& model);

}  // namespace gevmiss
