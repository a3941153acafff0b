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

#include "gevmiss/surge.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <string>

#include "gevmiss/csv.hpp"
#include "gevmiss/errors.hpp"

namespace gevmiss {

namespace {

bool read_int(std::string_view s, std::size_t& pos, std::size_t digits, int& out) {
  if (pos + digits > s.size()) return false;
  int v = 0;
  for (std::size_t i = 0; i < digits; ++i) {
    const char c = s[pos + i];
    if (c < '0' || c > '9') return false;
    v = v * 10 + (c - '0');
  }
  pos += digits;
  out = v;
  return true;
}

bool expect(std::string_view s, std::size_t& pos, std::string_view allowed) {
  if (pos >= s.size() || allowed.find(s[pos]) == std::string_view::npos) return false;
  ++pos;
  return true;
}

int year_of(Timestamp t) {
  using namespace std::chrono;
  return static_cast<int>(year_month_day{floor<days>(t)}.year());
}

std::string line_prefix(std::size_t line) { return "line " + std::to_string(line) + ": "; }

}  // namespace

std::optional<Timestamp> parse_timestamp(std::string_view text) {
  using namespace std::chrono;
  while (!text.empty() && text.back() == 'Z') text.remove_suffix(1);
  std::size_t pos = 0;
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0;
  if (!read_int(text, pos, 4, y) || !expect(text, pos, "-/") || !read_int(text, pos, 2, mo) ||
      !expect(text, pos, "-/") || !read_int(text, pos, 2, d)) {
    return std::nullopt;
  }
  if (pos < text.size()) {
    if (!expect(text, pos, " T") || !read_int(text, pos, 2, h) || !expect(text, pos, ":") ||
        !read_int(text, pos, 2, mi)) {
      return std::nullopt;
    }
    if (pos < text.size() && (!expect(text, pos, ":") || !read_int(text, pos, 2, sec))) {
      return std::nullopt;
    }
  }
  if (pos != text.size()) return std::nullopt;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || sec > 60) return std::nullopt;
  return sys_days{ymd} + hours{h} + minutes{mi} + seconds{sec};
}

std::string format_timestamp(Timestamp t) {
  using namespace std::chrono;
  const auto day_point = floor<days>(t);
  const year_month_day ymd{day_point};
  const hh_mm_ss hms{t - day_point};
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u %02ld:%02ld:%02ld", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<long>(hms.hours().count()), static_cast<long>(hms.minutes().count()),
                static_cast<long>(hms.seconds().count()));
  return buf;
}

FlaggedSeries ingest_csv(std::istream& in, const CsvLayout& layout) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("line 1: missing header row");
  const auto header = csv::split(line);
  auto column = [&](const std::string& name) -> std::optional<std::size_t> {
    if (name.empty()) return std::nullopt;
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw DataError("line 1: header has no column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const auto time_col = column(layout.time_column);
  const auto value_col = column(layout.value_column);
  const auto flag_col = column(layout.flag_column);
  if (!value_col) throw DataError("a value column is required");

  FlaggedSeries out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = csv::split(line);
    if (fields.size() != header.size()) {
      throw DataError(line_prefix(line_no) + "expected " + std::to_string(header.size()) +
                      " fields, found " + std::to_string(fields.size()));
    }
    if (time_col) {
      const auto ts = parse_timestamp(fields[*time_col]);
      if (!ts) throw DataError(line_prefix(line_no) + "bad timestamp '" + fields[*time_col] + "'");
      if (!out.timestamps.empty()) {
        if (*ts == out.timestamps.back()) {
          throw DataError(line_prefix(line_no) + "duplicate timestamp " + fields[*time_col]);
        }
        if (*ts < out.timestamps.back()) {
          throw DataError(line_prefix(line_no) + "timestamp " + fields[*time_col] +
                          " precedes the previous row");
        }
      }
      out.timestamps.push_back(*ts);
    }
    const std::string& field = fields[*value_col];
    double v = NAN;
    bool observed = std::find(layout.missing_sentinels.begin(), layout.missing_sentinels.end(),
                              field) == layout.missing_sentinels.end();
    if (observed) {
      if (!csv::parse_double(field, v)) {
        throw DataError(line_prefix(line_no) + "bad value '" + field + "'");
      }
      observed = std::isfinite(v);
    }
    if (flag_col) {
      const std::string& flag = fields[*flag_col];
      if (flag == "0") {
        observed = false;
      } else if (flag != "1") {
        throw DataError(line_prefix(line_no) + "observed flag must be 0 or 1, got '" + flag + "'");
      }
    }
    out.values.push_back(observed ? v : NAN);
    out.observed.push_back(observed);
  }
  return out;
}

FlaggedSeries ingest_csv(const std::filesystem::path& path, const CsvLayout& layout) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return ingest_csv(in, layout);
}

MeanModel parse_mean_model(std::string_view name) {
  if (name == "constant") return MeanModel::kConstant;
  if (name == "yearly") return MeanModel::kYearly;
  if (name == "linear") return MeanModel::kLinear;
  throw ConfigError("unknown mean model '" + std::string(name) + "'");
}

std::string_view to_string(MeanModel model) {
  switch (model) {
    case MeanModel::kConstant: return "constant";
    case MeanModel::kYearly: return "yearly";
    case MeanModel::kLinear: return "linear";
  }
  return "?";
}

namespace {

struct KnownConstituent {
  std::string_view name;
  double speed;
};

constexpr KnownConstituent kKnown[] = {
    {"M2", 28.9841042}, {"S2", 30.0},       {"N2", 28.4397295}, {"K2", 30.0821373},
    {"K1", 15.0410686}, {"O1", 13.9430356}, {"P1", 14.9589314}, {"Q1", 13.3986609},
    {"M4", 57.9682084}, {"MSF", 1.0158958}, {"MM", 0.5443747},  {"SA", 0.0410686},
    {"SSA", 0.0821373},
};

}  // namespace

std::vector<Constituent> default_constituents() {
  return parse_constituents("M2,S2,N2,K1,O1");
}

std::vector<Constituent> parse_constituents(std::string_view spec) {
  std::vector<Constituent> out;
  if (spec.empty() || spec == "none") return out;
  for (const std::string& item : csv::split(spec)) {
    if (item.empty()) continue;
    const auto colon = item.find(':');
    Constituent c;
    if (colon != std::string::npos) {
      c.name = item.substr(0, colon);
      if (!csv::parse_double(std::string_view(item).substr(colon + 1), c.speed) || !(c.speed > 0.0)) {
        throw ConfigError("bad constituent speed in '" + item + "'");
      }
    } else {
      std::string upper = item;
      std::transform(upper.begin(), upper.end(), upper.begin(),
                     [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
      const auto it = std::find_if(std::begin(kKnown), std::end(kKnown),
                                   [&](const KnownConstituent& k) { return k.name == upper; });
      if (it == std::end(kKnown)) throw ConfigError("unknown constituent '" + item + "'");
      c.name = upper;
      c.speed = it->speed;
    }
    out.push_back(c);
  }
  return out;
}

double TideModel::hours_since_origin(Timestamp t) const {
  return std::chrono::duration<double, std::ratio<3600>>(t - origin).count();
}

double TideModel::mean_level(Timestamp t) const {
  switch (mean_model) {
    case MeanModel::kConstant: return intercept;
    case MeanModel::kLinear: return intercept + slope_per_hour * hours_since_origin(t);
    case MeanModel::kYearly: {
      const auto it = yearly_means.find(year_of(t));
      return it == yearly_means.end() ? NAN : it->second;
    }
  }
  return NAN;
}

double TideModel::predict(Timestamp t) const {
  const double hrs = hours_since_origin(t);
  double level = mean_level(t);
  for (const Constituent& c : constituents) {
    level += c.amplitude * std::cos(std::numbers::pi * (c.speed * hrs - c.phase) / 180.0);
  }
  return level;
}

TideModel fit_tide(const FlaggedSeries& series, std::vector<Constituent> constituents,
                   MeanModel mean_model) {
  series.check_shape();
  if (!series.has_timestamps()) throw DataError("tide fitting requires timestamps");
  for (const Constituent& c : constituents) {
    if (!(c.speed > 0.0)) throw ConfigError("constituent " + c.name + " needs a positive speed");
  }

  TideModel model;
  model.mean_model = mean_model;
  model.origin = series.timestamps.front();
  model.constituents = std::move(constituents);

  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (series.observed[i]) rows.push_back(i);
  }

  // Mean-model columns first, then a cos/sin pair per constituent.
  std::vector<int> years;
  if (mean_model == MeanModel::kYearly) {
    for (std::size_t i : rows) years.push_back(year_of(series.timestamps[i]));
    std::sort(years.begin(), years.end());
    years.erase(std::unique(years.begin(), years.end()), years.end());
  }
  const std::size_t mean_cols = mean_model == MeanModel::kYearly   ? years.size()
                                : mean_model == MeanModel::kLinear ? 2
                                                                   : 1;
  const std::size_t cols = mean_cols + 2 * model.constituents.size();
  if (rows.size() < cols || rows.empty()) {
    throw DataError("tide fit needs at least " + std::to_string(std::max<std::size_t>(cols, 1)) +
                    " observed points, got " + std::to_string(rows.size()));
  }

  const double span = std::max(1.0, model.hours_since_origin(series.timestamps.back()));
  Eigen::MatrixXd design = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()),
                                                 static_cast<Eigen::Index>(cols));
  Eigen::VectorXd y(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::size_t i = rows[r];
    const auto ri = static_cast<Eigen::Index>(r);
    const double hrs = model.hours_since_origin(series.timestamps[i]);
    y(ri) = series.values[i];
    switch (mean_model) {
      case MeanModel::kConstant: design(ri, 0) = 1.0; break;
      case MeanModel::kLinear:
        design(ri, 0) = 1.0;
        design(ri, 1) = hrs / span;
        break;
      case MeanModel::kYearly: {
        const auto it = std::lower_bound(years.begin(), years.end(), year_of(series.timestamps[i]));
        design(ri, it - years.begin()) = 1.0;
        break;
      }
    }
    for (std::size_t c = 0; c < model.constituents.size(); ++c) {
      const double theta = std::numbers::pi * model.constituents[c].speed * hrs / 180.0;
      design(ri, static_cast<Eigen::Index>(mean_cols + 2 * c)) = std::cos(theta);
      design(ri, static_cast<Eigen::Index>(mean_cols + 2 * c + 1)) = std::sin(theta);
    }
  }

  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  const Eigen::VectorXd diag = qr.matrixR().diagonal().cwiseAbs();
  if (diag.size() > 0 && diag.minCoeff() <= 1e-10 * diag.maxCoeff()) {
    throw NumericalError("tide design matrix is rank deficient (reciprocal condition " +
                         std::to_string(diag.minCoeff() / diag.maxCoeff()) +
                         "); drop near-duplicate constituents or use a longer record");
  }
  const Eigen::VectorXd beta = qr.solve(y);

  switch (mean_model) {
    case MeanModel::kConstant: model.intercept = beta(0); break;
    case MeanModel::kLinear:
      model.intercept = beta(0);
      model.slope_per_hour = beta(1) / span;
      break;
    case MeanModel::kYearly:
      for (std::size_t j = 0; j < years.size(); ++j) {
        model.yearly_means[years[j]] = beta(static_cast<Eigen::Index>(j));
      }
      break;
  }
  for (std::size_t c = 0; c < model.constituents.size(); ++c) {
    const double a = beta(static_cast<Eigen::Index>(mean_cols + 2 * c));
    const double b = beta(static_cast<Eigen::Index>(mean_cols + 2 * c + 1));
    Constituent& con = model.constituents[c];
    con.amplitude = std::hypot(a, b);
    double phase = std::atan2(b, a) * 180.0 / std::numbers::pi;
    if (phase < 0.0) phase += 360.0;
    if (phase >= 360.0) phase -= 360.0;
    con.phase = phase;
  }
  return model;
}

SurgeSeries detide(const FlaggedSeries& series, const TideModel& model) {
  series.check_shape();
  if (!series.has_timestamps()) throw DataError("detiding requires timestamps");
  SurgeSeries out;
  out.levels = series.values;
  out.residuals = series;
  for (std::size_t i = 0; i < series.size(); ++i) {
    out.residuals.values[i] =
        series.observed[i] ? series.values[i] - model.predict(series.timestamps[i]) : NAN;
  }
  return out;
}

void write_surge_csv(std::ostream& out, const SurgeSeries& surge) {
  const FlaggedSeries& r = surge.residuals;
  out << "timestamp,level,residual,observed\n";
  for (std::size_t i = 0; i < r.size(); ++i) {
    const bool obs = r.observed[i];
    out << (r.has_timestamps() ? format_timestamp(r.timestamps[i]) : std::to_string(i)) << ','
        << (std::isfinite(surge.levels[i]) ? csv::format_double(surge.levels[i]) : "") << ','
        << (obs ? csv::format_double(r.values[i]) : "") << ',' << (obs ? 1 : 0) << '\n';
  }
}

SurgeSeries read_surge_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("line 1: missing header row");
  if (csv::split(line) != std::vector<std::string>{"timestamp", "level", "residual", "observed"}) {
    throw DataError("line 1: expected header timestamp,level,residual,observed");
  }
  SurgeSeries out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto f = csv::split(line);
    if (f.size() != 4) throw DataError(line_prefix(line_no) + "expected 4 fields");
    const auto ts = parse_timestamp(f[0]);
    if (!ts) throw DataError(line_prefix(line_no) + "bad timestamp '" + f[0] + "'");
    if (!out.residuals.timestamps.empty() && *ts <= out.residuals.timestamps.back()) {
      throw DataError(line_prefix(line_no) + "timestamps must be strictly increasing");
    }
    double level = NAN;
    if (!f[1].empty() && !csv::parse_double(f[1], level)) {
      throw DataError(line_prefix(line_no) + "bad level '" + f[1] + "'");
    }
    if (f[3] != "0" && f[3] != "1") throw DataError(line_prefix(line_no) + "bad observed flag");
    const bool obs = f[3] == "1";
    double resid = NAN;
    if (obs && !csv::parse_double(f[2], resid)) {
      throw DataError(line_prefix(line_no) + "observed row without a residual");
    }
    out.residuals.timestamps.push_back(*ts);
    out.residuals.values.push_back(resid);
    out.residuals.observed.push_back(obs);
    out.levels.push_back(level);
  }
  return out;
}

void write_tide_model_csv(std::ostream& out, const TideModel& model) {
  out << "term,speed_deg_per_hour,amplitude,phase_deg\n";
  switch (model.mean_model) {
    case MeanModel::kConstant:
      out << "mean,0," << csv::format_double(model.intercept) << ",0\n";
      break;
    case MeanModel::kLinear:
      out << "mean,0," << csv::format_double(model.intercept) << ",0\n";
      out << "trend_per_hour,0," << csv::format_double(model.slope_per_hour) << ",0\n";
      break;
    case MeanModel::kYearly:
      for (const auto& [year, level] : model.yearly_means) {
        out << "mean_" << year << ",0," << csv::format_double(level) << ",0\n";
      }
      break;
  }
  for (const Constituent& c : model.constituents) {
    out << c.name << ',' << csv::format_double(c.speed) << ',' << csv::format_double(c.amplitude)
        << ',' << csv::format_double(c.phase) << '\n';
  }
}

}  // namespace gevmiss
