/**
 * @file config.hpp
 * @brief Run configuration read from an INI file.
 *
 * Sections and keys:
 *
 *   [grid]    L, ell, nx, ny                                   (required)
 *   [params]  d1, d2, d3, bi_m, henry, u1_d, k, alpha, beta,
 *             r_kernel = identity | saturating, r_cap,
 *             q_kernel = constant | linear_decay, c_bar, q_m4,
 *             m3, m4                                           (default: scenario parameters)
 *   [time]    t_end (required), mode = fixed | adaptive, dt, rtol, atol,
 *             snapshot_times = comma separated list
 *   [run]     scenario (required), seed, micro_slices = comma separated x values
 *   [sweep]   levels, threshold
 *   [mms]     solution = smooth | constant | y_only, levels
 *
 * Unknown sections or keys are rejected.
 */
#pragma once

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "twoscale/scenarios.hpp"

namespace twoscale {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GridConfig {
  double L = 1.0;
  double ell = 1.0;
  int nx = 16;
  int ny = 16;
};

enum class MmsSolution { smooth, constant, y_only };

struct RunConfig {
  GridConfig grid;
  ModelParams params;
  TimeSpec time;
  std::string scenario = "fig1";
  std::uint64_t seed = 42;
  std::vector<double> micro_slices;
  int sweep_levels = 3;
  double sweep_threshold = 1.25;
  MmsSolution mms_solution = MmsSolution::smooth;
  int mms_levels = 3;

  GridSpec grid_spec() const { return make_grid(grid.L, grid.ell, grid.nx, grid.ny); }
};

namespace detail {

inline double parse_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* b = text.data();
  const char* e = b + text.size();
  const auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e) throw ConfigError("key '" + key + "': expected a number, got '" + text + "'");
  return v;
}

inline long long parse_int(const std::string& key, const std::string& text) {
  long long v = 0;
  const char* b = text.data();
  const char* e = b + text.size();
  const auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e) throw ConfigError("key '" + key + "': expected an integer, got '" + text + "'");
  return v;
}

inline std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    if (first == std::string::npos) throw ConfigError("key '" + key + "': empty list entry");
    out.push_back(parse_double(key, item.substr(first, last - first + 1)));
  }
  return out;
}

/// Flat view of a parsed INI tree with bookkeeping of consumed keys.
class KeyReader {
 public:
  explicit KeyReader(const boost::property_tree::ptree& tree) {
    for (const auto& [section, body] : tree) {
      if (body.empty() && !body.data().empty())
        throw ConfigError("key '" + section + "' must be inside a section");
      for (const auto& [key, value] : body) values_[section + "." + key] = value.data();
    }
  }

  std::optional<std::string> get(const std::string& key) {
    used_.insert(key);
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
  }
  std::string require(const std::string& key) {
    auto v = get(key);
    if (!v) throw ConfigError("missing required key '" + key + "'");
    return *v;
  }
  void number(const std::string& key, double& target) {
    if (auto v = get(key)) target = parse_double(key, *v);
  }
  void integer(const std::string& key, int& target) {
    if (auto v = get(key)) target = static_cast<int>(parse_int(key, *v));
  }
  void reject_unknown() const {
    for (const auto& [key, value] : values_)
      if (!used_.count(key)) throw ConfigError("unknown key '" + key + "'");
  }

 private:
  std::map<std::string, std::string> values_;
  std::set<std::string> used_;
};

}  // namespace detail

/// Parses INI text. Parameter defaults come from the named scenario.
inline RunConfig parse_config(const std::string& text) {
  boost::property_tree::ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  detail::KeyReader r(tree);
  RunConfig c;

  c.scenario = r.require("run.scenario");
  if (std::find(scenario_names().begin(), scenario_names().end(), c.scenario) == scenario_names().end())
    throw ConfigError("run.scenario: unknown scenario '" + c.scenario + "'");
  if (auto v = r.get("run.seed")) c.seed = static_cast<std::uint64_t>(detail::parse_int("run.seed", *v));
  if (auto v = r.get("run.micro_slices")) c.micro_slices = detail::parse_list("run.micro_slices", *v);

  c.grid.L = detail::parse_double("grid.L", r.require("grid.L"));
  c.grid.ell = detail::parse_double("grid.ell", r.require("grid.ell"));
  c.grid.nx = static_cast<int>(detail::parse_int("grid.nx", r.require("grid.nx")));
  c.grid.ny = static_cast<int>(detail::parse_int("grid.ny", r.require("grid.ny")));

  ModelParams& p = c.params;
  p = scenario_params(c.scenario);
  r.number("params.d1", p.d1);
  r.number("params.d2", p.d2);
  r.number("params.d3", p.d3);
  r.number("params.bi_m", p.bi_m);
  r.number("params.henry", p.henry);
  r.number("params.u1_d", p.u1_d);
  r.number("params.k", p.k);
  if (auto v = r.get("params.alpha")) p.alpha = YCoefficient::constant(detail::parse_double("params.alpha", *v));
  if (auto v = r.get("params.beta")) p.beta = YCoefficient::constant(detail::parse_double("params.beta", *v));
  if (auto v = r.get("params.r_kernel")) {
    if (*v == "identity") p.r_kernel = RKernel::identity();
    else if (*v == "saturating") p.r_kernel = RKernel::saturating(1.0);
    else throw ConfigError("params.r_kernel: expected identity or saturating, got '" + *v + "'");
  }
  r.number("params.r_cap", p.r_kernel.cap);
  if (auto v = r.get("params.q_kernel")) {
    if (*v == "constant") p.q_kernel.kind = QKernel::Kind::constant;
    else if (*v == "linear_decay") p.q_kernel.kind = QKernel::Kind::linear_decay;
    else throw ConfigError("params.q_kernel: expected constant or linear_decay, got '" + *v + "'");
  }
  r.number("params.c_bar", p.q_kernel.c_bar);
  r.number("params.q_m4", p.q_kernel.m4);
  if (auto v = r.get("params.m3")) p.m3 = detail::parse_double("params.m3", *v);
  if (auto v = r.get("params.m4")) p.m4 = detail::parse_double("params.m4", *v);

  TimeSpec& t = c.time;
  t.t_end = detail::parse_double("time.t_end", r.require("time.t_end"));
  if (auto v = r.get("time.mode")) {
    if (*v == "fixed") t.mode = StepMode::fixed;
    else if (*v == "adaptive") t.mode = StepMode::adaptive;
    else throw ConfigError("time.mode: expected fixed or adaptive, got '" + *v + "'");
  }
  if (auto v = r.get("time.dt")) t.dt = detail::parse_double("time.dt", *v);
  r.number("time.rtol", t.rtol);
  r.number("time.atol", t.atol);
  if (auto v = r.get("time.snapshot_times")) t.snapshot_times = detail::parse_list("time.snapshot_times", *v);

  r.integer("sweep.levels", c.sweep_levels);
  r.number("sweep.threshold", c.sweep_threshold);
  if (auto v = r.get("mms.solution")) {
    if (*v == "smooth") c.mms_solution = MmsSolution::smooth;
    else if (*v == "constant") c.mms_solution = MmsSolution::constant;
    else if (*v == "y_only") c.mms_solution = MmsSolution::y_only;
    else throw ConfigError("mms.solution: expected smooth, constant or y_only, got '" + *v + "'");
  }
  r.integer("mms.levels", c.mms_levels);
  r.reject_unknown();
  return c;
}

/// Checks grid, time and parameter constraints before any compute.
/// Decoupled verification scenarios are validated in degenerate mode.
inline void validate_config(const RunConfig& c) {
  try {
    const GridSpec g = c.grid_spec();
    const bool decoupled = c.scenario != "fig1";
    validate(c.params, &g, decoupled ? Validation::degenerate : Validation::strict);
    for (double x : c.micro_slices)
      if (!(x >= 0.0 && x <= c.grid.L)) throw ConfigError("run.micro_slices: x = " + std::to_string(x) + " outside [0, L]");
    detail::resolve_snapshots(c.time);
  } catch (const InvalidGrid& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  } catch (const TimeSpecError& e) {
    throw ConfigError(std::string("time: ") + e.what());
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("params: ") + e.what());
  }
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  RunConfig c = parse_config(ss.str());
  validate_config(c);
  return c;
}

/// Canonical key = value listing of the resolved configuration.
inline std::string config_echo(const RunConfig& c) {
  std::ostringstream o;
  o.precision(17);
  auto list = [](const std::vector<double>& v) {
    std::ostringstream s;
    s.precision(17);
    for (std::size_t k = 0; k < v.size(); ++k) s << (k ? "," : "") << v[k];
    return s.str();
  };
  const ModelParams& p = c.params;
  o << "grid.L = " << c.grid.L << "\n"
    << "grid.ell = " << c.grid.ell << "\n"
    << "grid.nx = " << c.grid.nx << "\n"
    << "grid.ny = " << c.grid.ny << "\n"
    << "params.d1 = " << p.d1 << "\n"
    << "params.d2 = " << p.d2 << "\n"
    << "params.d3 = " << p.d3 << "\n"
    << "params.bi_m = " << p.bi_m << "\n"
    << "params.henry = " << p.henry << "\n"
    << "params.u1_d = " << p.u1_d << "\n"
    << "params.k = " << p.k << "\n"
    << "params.alpha = " << (p.alpha.is_constant() ? detail::fmt17(p.alpha.constant_value()) : list(p.alpha.samples()))
    << "\n"
    << "params.beta = " << (p.beta.is_constant() ? detail::fmt17(p.beta.constant_value()) : list(p.beta.samples()))
    << "\n"
    << "params.r_kernel = " << (p.r_kernel.kind == RKernel::Kind::identity ? "identity" : "saturating") << "\n"
    << "params.r_cap = " << p.r_kernel.cap << "\n"
    << "params.q_kernel = " << (p.q_kernel.kind == QKernel::Kind::constant ? "constant" : "linear_decay") << "\n"
    << "params.c_bar = " << p.q_kernel.c_bar << "\n"
    << "params.q_m4 = " << p.q_kernel.m4 << "\n"
    << "params.m3 = " << (p.m3 ? detail::fmt17(*p.m3) : "none") << "\n"
    << "params.m4 = " << (p.m4 ? detail::fmt17(*p.m4) : "none") << "\n"
    << "time.t_end = " << c.time.t_end << "\n"
    << "time.mode = " << (c.time.mode == StepMode::fixed ? "fixed" : "adaptive") << "\n"
    << "time.dt = " << (c.time.dt ? *c.time.dt : 0.0) << "\n"
    << "time.rtol = " << c.time.rtol << "\n"
    << "time.atol = " << c.time.atol << "\n"
    << "time.snapshot_times = " << list(c.time.snapshot_times) << "\n"
    << "run.scenario = " << c.scenario << "\n"
    << "run.seed = " << c.seed << "\n"
    << "run.micro_slices = " << list(c.micro_slices) << "\n"
    << "sweep.levels = " << c.sweep_levels << "\n"
    << "sweep.threshold = " << c.sweep_threshold << "\n"
    << "mms.solution = "
    << (c.mms_solution == MmsSolution::smooth ? "smooth" : c.mms_solution == MmsSolution::constant ? "constant" : "y_only")
    << "\n"
    << "mms.levels = " << c.mms_levels << "\n";
  return o.str();
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string config_hash(const RunConfig& c) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(config_echo(c))));
  return buf;
}

}  // namespace twoscale
