#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "sessrl/rng.hpp"

namespace sessrl {

enum class CaseLabel { winter, spring, summer };

inline std::string to_string(CaseLabel c) {
  switch (c) {
    case CaseLabel::winter: return "winter";
    case CaseLabel::spring: return "spring";
    case CaseLabel::summer: return "summer";
  }
  throw std::logic_error("bad CaseLabel");
}

inline CaseLabel case_from_string(const std::string& s) {
  if (s == "winter") return CaseLabel::winter;
  if (s == "spring") return CaseLabel::spring;
  if (s == "summer") return CaseLabel::summer;
  throw std::invalid_argument("unknown case label: " + s +
                              " (expected winter|spring|summer)");
}

// Hourly price / outdoor-temperature records. Uniform 1-hour spacing is
// structural: we keep the first timestamp plus contiguous arrays.
struct PriceTemperatureSeries {
  std::int64_t start_hour = 0;  // hours since 1970-01-01 00:00
  std::vector<double> prices;   // currency per MWh
  std::vector<double> temps;    // degrees C

  std::size_t size() const { return prices.size(); }
  std::int64_t hour_at(std::size_t i) const {
    return start_hour + static_cast<std::int64_t>(i);
  }
  std::int64_t end_hour() const {
    return start_hour + static_cast<std::int64_t>(size());
  }
  bool contains(std::int64_t hour) const {
    return hour >= start_hour && hour < end_hour();
  }
  std::size_t index_of(std::int64_t hour) const {
    if (!contains(hour)) {
      throw std::out_of_range("hour " + std::to_string(hour) +
                              " outside series [" + std::to_string(start_hour) +
                              ", " + std::to_string(end_hour()) + ")");
    }
    return static_cast<std::size_t>(hour - start_hour);
  }
};

struct EpisodeWindow {
  CaseLabel case_label = CaseLabel::winter;
  std::int64_t start_hour = 0;
  std::vector<double> prices;  // currency per MWh, length K
  std::vector<double> temps;   // degrees C, length K

  std::size_t steps() const { return prices.size(); }
};

struct PriceAverageState {
  double p_bar = 0.0;
  double eta = 0.2;
};

inline PriceAverageState update_price_average(PriceAverageState state, double p) {
  if (!(state.eta > 0.0 && state.eta <= 1.0)) {
    throw std::invalid_argument("price-average eta must be in (0,1]");
  }
  if (!std::isfinite(p) || !std::isfinite(state.p_bar)) {
    throw std::invalid_argument("price-average inputs must be finite");
  }
  state.p_bar = (1.0 - state.eta) * state.p_bar + state.eta * p;
  return state;
}

// ---- timestamp parsing ----------------------------------------------------

namespace detail {

// days since 1970-01-01 (Howard Hinnant's civil-days algorithm)
inline std::int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const int era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return static_cast<std::int64_t>(era) * 146097 +
         static_cast<std::int64_t>(doe) - 719468;
}

inline bool all_digits(const std::string& s, std::size_t from, std::size_t n) {
  if (from + n > s.size()) return false;
  for (std::size_t i = from; i < from + n; ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  return true;
}

}  // namespace detail

// Accepts "YYYY-MM-DD HH:MM" (or 'T' separator); trailing seconds / UTC
// offsets are ignored. Returns hours since 1970-01-01 00:00.
inline std::int64_t parse_hour_timestamp(const std::string& s) {
  const bool shaped = s.size() >= 16 && detail::all_digits(s, 0, 4) &&
                      s[4] == '-' && detail::all_digits(s, 5, 2) &&
                      s[7] == '-' && detail::all_digits(s, 8, 2) &&
                      (s[10] == ' ' || s[10] == 'T') &&
                      detail::all_digits(s, 11, 2) && s[13] == ':' &&
                      detail::all_digits(s, 14, 2);
  if (!shaped) {
    throw std::invalid_argument("unparseable timestamp: '" + s + "'");
  }
  const int y = std::stoi(s.substr(0, 4));
  const int mo = std::stoi(s.substr(5, 2));
  const int d = std::stoi(s.substr(8, 2));
  const int h = std::stoi(s.substr(11, 2));
  if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23) {
    throw std::invalid_argument("timestamp field out of range: '" + s + "'");
  }
  return detail::days_from_civil(y, mo, d) * 24 + h;
}

inline std::string format_hour_timestamp(std::int64_t hour) {
  // invert days_from_civil (civil_from_days)
  std::int64_t z = hour >= 0 ? hour / 24 : (hour - 23) / 24;
  const int h = static_cast<int>(hour - z * 24);
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp + (mp < 10 ? 3 : -9);
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02u %02d:00",
                static_cast<long long>(y + (m <= 2)), m, d, h);
  return std::string(buf);
}

// ---- CSV ingestion ---------------------------------------------------------

struct ColumnMap {
  std::string time = "time";
  std::string price = "price";
  std::string temp = "temp";
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  out.push_back(field);
  return out;
}

inline bool is_missing_field(const std::string& s) {
  if (s.empty()) return true;
  return s == "nan" || s == "NaN" || s == "NAN" || s == "NA" || s == "null";
}

inline double parse_number(const std::string& s, std::size_t line_no,
                           const std::string& what) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw std::runtime_error("line " + std::to_string(line_no) +
                             ": malformed " + what + " value '" + s + "'");
  }
  while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
  if (pos != s.size() || !std::isfinite(v)) {
    throw std::runtime_error("line " + std::to_string(line_no) +
                             ": malformed " + what + " value '" + s + "'");
  }
  return v;
}

}  // namespace detail

// Loads an hourly CSV with a header row. Rows with missing price/temperature
// are dropped; anything that breaks uniform 1-hour spacing after the drop is
// an error rather than being patched over.
inline PriceTemperatureSeries load_csv(const std::string& path,
                                       const ColumnMap& columns = {}) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open dataset file: " + path);
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("dataset file is empty: " + path);
  }
  const auto header = detail::split_csv_line(line);
  int time_col = -1, price_col = -1, temp_col = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == columns.time) time_col = static_cast<int>(i);
    if (header[i] == columns.price) price_col = static_cast<int>(i);
    if (header[i] == columns.temp) temp_col = static_cast<int>(i);
  }
  if (time_col < 0 || price_col < 0 || temp_col < 0) {
    throw std::runtime_error(
        "dataset header is missing a mapped column (need '" + columns.time +
        "', '" + columns.price + "', '" + columns.temp + "')");
  }

  std::vector<std::int64_t> hours;
  std::vector<double> prices, temps;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = detail::split_csv_line(line);
    const std::size_t need = static_cast<std::size_t>(
        std::max(time_col, std::max(price_col, temp_col)));
    if (fields.size() <= need) {
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": expected at least " + std::to_string(need + 1) +
                               " columns, got " + std::to_string(fields.size()));
    }
    const std::string& pf = fields[price_col];
    const std::string& tf = fields[temp_col];
    if (detail::is_missing_field(pf) || detail::is_missing_field(tf)) {
      continue;  // drop-then-validate
    }
    std::int64_t hour = 0;
    try {
      hour = parse_hour_timestamp(fields[time_col]);
    } catch (const std::exception& e) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": " +
                               e.what());
    }
    hours.push_back(hour);
    prices.push_back(detail::parse_number(pf, line_no, "price"));
    temps.push_back(detail::parse_number(tf, line_no, "temperature"));
  }
  if (hours.empty()) {
    throw std::runtime_error("dataset has no usable rows: " + path);
  }
  for (std::size_t i = 1; i < hours.size(); ++i) {
    if (hours[i] != hours[i - 1] + 1) {
      throw std::runtime_error(
          "non-uniform spacing after cleaning: " + std::to_string(hours[i]) +
          " follows " + std::to_string(hours[i - 1]) + " (" +
          format_hour_timestamp(hours[i]) + " after " +
          format_hour_timestamp(hours[i - 1]) + ")");
    }
  }
  PriceTemperatureSeries series;
  series.start_hour = hours.front();
  series.prices = std::move(prices);
  series.temps = std::move(temps);
  return series;
}

// ---- episode window sampling ----------------------------------------------

enum class SampleMode { train, eval };

// Per-case slice of the source series; eval_start_hour pins the canonical
// evaluation window.
struct CaseRange {
  std::int64_t start_hour = 0;
  std::int64_t end_hour = 0;  // exclusive
  std::int64_t eval_start_hour = 0;
};

inline EpisodeWindow slice_window(const PriceTemperatureSeries& series,
                                  CaseLabel label, std::int64_t start_hour,
                                  std::size_t steps) {
  const std::size_t i0 = series.index_of(start_hour);
  if (i0 + steps > series.size()) {
    throw std::out_of_range("window of " + std::to_string(steps) +
                            " steps starting " + format_hour_timestamp(start_hour) +
                            " runs past the end of the series");
  }
  EpisodeWindow w;
  w.case_label = label;
  w.start_hour = start_hour;
  w.prices.assign(series.prices.begin() + i0, series.prices.begin() + i0 + steps);
  w.temps.assign(series.temps.begin() + i0, series.temps.begin() + i0 + steps);
  return w;
}

inline EpisodeWindow sample_window(const PriceTemperatureSeries& series,
                                   const CaseRange& range, CaseLabel label,
                                   SampleMode mode, std::size_t steps,
                                   std::mt19937_64& rng) {
  if (range.end_hour - range.start_hour < static_cast<std::int64_t>(steps)) {
    throw std::invalid_argument(
        "case range for " + to_string(label) + " is shorter than " +
        std::to_string(steps) + " hours");
  }
  if (mode == SampleMode::eval) {
    return slice_window(series, label, range.eval_start_hour, steps);
  }
  const std::int64_t last_start =
      range.end_hour - static_cast<std::int64_t>(steps);
  std::uniform_int_distribution<std::int64_t> dist(range.start_hour, last_start);
  return slice_window(series, label, dist(rng), steps);
}

// ---- synthetic fallback series ---------------------------------------------

struct SynthCaseSpec {
  double price_mean = 55.0;  // currency per MWh
  double price_amp = 18.0;
  double price_noise = 2.5;
  double temp_mean = 19.0;  // degrees C
  double temp_amp = 6.0;
  double temp_noise = 0.8;
};

inline SynthCaseSpec synth_case_defaults(CaseLabel label) {
  switch (label) {
    case CaseLabel::winter: return {62.0, 20.0, 2.5, 3.0, 4.0, 0.8};
    case CaseLabel::spring: return {55.0, 18.0, 2.5, 19.0, 6.0, 0.8};
    case CaseLabel::summer: return {50.0, 16.0, 2.5, 28.0, 5.0, 0.8};
  }
  throw std::logic_error("bad CaseLabel");
}

inline constexpr std::int64_t kSynthStartHour = 394464;  // 2015-01-01 00:00

// Daily sinusoids: price peaks at 20:00, outdoor temperature at 15:00,
// plus seeded Gaussian noise.
inline PriceTemperatureSeries synth_series(CaseLabel label, std::size_t length,
                                           std::uint64_t seed,
                                           const SynthCaseSpec& spec) {
  if (length < 96) {
    throw std::invalid_argument("synthetic series must cover at least 96 hours");
  }
  constexpr double kTwoPi = 6.283185307179586476925286766559;
  std::mt19937_64 rng = make_rng(seed, 0x5e51e5ULL + static_cast<int>(label));
  std::normal_distribution<double> gauss(0.0, 1.0);
  PriceTemperatureSeries series;
  series.start_hour = kSynthStartHour;
  series.prices.resize(length);
  series.temps.resize(length);
  for (std::size_t h = 0; h < length; ++h) {
    const double hd = static_cast<double>(h);
    const double price = spec.price_mean +
                         spec.price_amp * std::cos(kTwoPi * (hd - 20.0) / 24.0) +
                         spec.price_noise * gauss(rng);
    const double temp = spec.temp_mean +
                        spec.temp_amp * std::cos(kTwoPi * (hd - 15.0) / 24.0) +
                        spec.temp_noise * gauss(rng);
    series.prices[h] = std::max(price, 1.0);  // spot prices stay positive
    series.temps[h] = temp;
  }
  return series;
}

inline PriceTemperatureSeries synth_series(CaseLabel label, std::size_t length,
                                           std::uint64_t seed) {
  return synth_series(label, length, seed, synth_case_defaults(label));
}

}  // namespace sessrl
