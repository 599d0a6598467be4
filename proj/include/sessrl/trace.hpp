#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sessrl/timeseries.hpp"

namespace sessrl {

// One simulated step as seen by the metrics: decision-time prices, the
// projected actions, and the resulting temperatures / state of charge.
struct TraceStep {
  int k = 0;
  double price = 0.0;       // currency per kWh
  double price_avg = 0.0;   // moving average at decision time
  double outdoor_temp = 0.0;
  std::vector<double> indoor_temp;  // post-step, per building
  std::vector<double> grid_power;
  std::vector<double> sess_power;
  std::vector<double> discharge;
  std::vector<double> reward;
  double charge_power = 0.0;
  double soc = 0.0;  // post-step
  double sess_reward = 0.0;
};

struct EpisodeTrace {
  std::string method;
  CaseLabel case_label = CaseLabel::winter;
  std::int64_t start_hour = 0;
  double dt = 1.0;
  std::size_t horizon = 0;              // expected number of steps
  std::vector<double> target_temps;     // per building
  std::vector<double> initial_temps;
  double initial_soc = 0.0;
  std::vector<TraceStep> steps;

  std::size_t n_buildings() const { return target_temps.size(); }
  bool complete() const { return horizon > 0 && steps.size() == horizon; }
};

namespace detail {

inline std::string fmt_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

inline std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

inline std::string join_double_list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out.push_back(';');
    out += fmt_full(v[i]);
  }
  return out;
}

}  // namespace detail

inline void write_trace_csv(const EpisodeTrace& trace, std::ostream& out) {
  const std::size_t n = trace.n_buildings();
  out << "# sessrl-trace v1 method=" << trace.method
      << " case=" << to_string(trace.case_label)
      << " start_hour=" << trace.start_hour
      << " dt=" << detail::fmt_full(trace.dt)
      << " horizon=" << trace.horizon
      << " targets=" << detail::join_double_list(trace.target_temps)
      << " init_temps=" << detail::join_double_list(trace.initial_temps)
      << " init_soc=" << detail::fmt_full(trace.initial_soc) << "\n";
  out << "k,p,p_bar,T_out";
  for (std::size_t i = 1; i <= n; ++i) {
    out << ",T_in_" << i << ",P_g_" << i << ",P_d_" << i << ",d_" << i
        << ",reward_" << i;
  }
  out << ",c,soc,sess_reward\n";
  for (const auto& s : trace.steps) {
    out << s.k << ',' << detail::fmt_full(s.price) << ','
        << detail::fmt_full(s.price_avg) << ','
        << detail::fmt_full(s.outdoor_temp);
    for (std::size_t i = 0; i < n; ++i) {
      out << ',' << detail::fmt_full(s.indoor_temp[i]) << ','
          << detail::fmt_full(s.grid_power[i]) << ','
          << detail::fmt_full(s.sess_power[i]) << ','
          << detail::fmt_full(s.discharge[i]) << ','
          << detail::fmt_full(s.reward[i]);
    }
    out << ',' << detail::fmt_full(s.charge_power) << ','
        << detail::fmt_full(s.soc) << ',' << detail::fmt_full(s.sess_reward)
        << "\n";
  }
}

inline void write_trace_csv(const EpisodeTrace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write trace file: " + path);
  write_trace_csv(trace, out);
}

inline EpisodeTrace read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file: " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("# sessrl-trace v1 ", 0) != 0) {
    throw std::runtime_error("not a sessrl trace file: " + path);
  }
  EpisodeTrace trace;
  {
    std::stringstream ss(line.substr(2));
    std::string tok;
    while (ss >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = tok.substr(0, eq);
      const std::string val = tok.substr(eq + 1);
      if (key == "method") trace.method = val;
      else if (key == "case") trace.case_label = case_from_string(val);
      else if (key == "start_hour") trace.start_hour = std::stoll(val);
      else if (key == "dt") trace.dt = std::stod(val);
      else if (key == "horizon") trace.horizon = std::stoul(val);
      else if (key == "targets") trace.target_temps = detail::parse_double_list(val);
      else if (key == "init_temps") trace.initial_temps = detail::parse_double_list(val);
      else if (key == "init_soc") trace.initial_soc = std::stod(val);
    }
  }
  if (!std::getline(in, line)) {
    throw std::runtime_error("trace file missing header row: " + path);
  }
  const std::size_t n = trace.n_buildings();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    const std::size_t expect = 4 + 5 * n + 3;
    if (cells.size() != expect) {
      throw std::runtime_error("trace row has " + std::to_string(cells.size()) +
                               " cells, expected " + std::to_string(expect));
    }
    TraceStep s;
    std::size_t c = 0;
    s.k = std::stoi(cells[c++]);
    s.price = std::stod(cells[c++]);
    s.price_avg = std::stod(cells[c++]);
    s.outdoor_temp = std::stod(cells[c++]);
    for (std::size_t i = 0; i < n; ++i) {
      s.indoor_temp.push_back(std::stod(cells[c++]));
      s.grid_power.push_back(std::stod(cells[c++]));
      s.sess_power.push_back(std::stod(cells[c++]));
      s.discharge.push_back(std::stod(cells[c++]));
      s.reward.push_back(std::stod(cells[c++]));
    }
    s.charge_power = std::stod(cells[c++]);
    s.soc = std::stod(cells[c++]);
    s.sess_reward = std::stod(cells[c++]);
    trace.steps.push_back(std::move(s));
  }
  return trace;
}

}  // namespace sessrl
