/**
 * @file scenarios.hpp
 * @brief Named problem setups: the gypsum-front illustration and the
 *        decoupled special cases used by the verification suites.
 */
#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "twoscale/diagnostics.hpp"

namespace twoscale {

class UnknownScenario : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parameters of the gypsum-front illustration. Gas enters at x = 0, is
/// absorbed into the pore water, oxidised to acid and consumed at the pore
/// wall, where gypsum accumulates up to the saturation level M4.
inline ModelParams fig1_params() {
  ModelParams p;
  p.d1 = 2.5e-4;
  p.d2 = 1e-2;
  p.d3 = 1e-2;
  p.bi_m = 0.05;
  p.henry = 1.0;
  p.u1_d = 1.0;
  p.k = 0.5;
  p.alpha = YCoefficient::constant(0.05);
  p.beta = YCoefficient::constant(0.05);
  p.r_kernel = RKernel::identity();
  p.q_kernel = QKernel::linear_decay(1.0, 1.0);
  p.m3 = 4.0;
  p.m4 = 1.0;
  return p;
}

inline std::vector<double> fig1_times() { return {0.0, 80.0, 160.0, 240.0, 320.0, 400.0}; }

/// Smooth initial data compatible with every boundary condition: u1 equals
/// u1_D at x = 0 with zero curvature there and zero slope at x = L, u2 is in
/// Henry equilibrium with u1 (no exchange at t = 0), acid and gypsum are absent.
inline State fig1_initial(const GridSpec& g, const ModelParams& p) {
  const double L = g.L();
  auto u1 = [&](double x) {
    return p.u1_d * (1.0 - std::sin(std::numbers::pi * x / (2.0 * L)));
  };
  return project_initial(
      g, p, u1, [&](double x, double) { return p.henry * u1(x); }, [](double, double) { return 0.0; },
      [](double) { return 0.0; });
}

inline ScenarioInstance fig1_scenario(const GridSpec& g, const ModelParams& p = fig1_params()) {
  return {p, fig1_initial(g, p), {}};
}

/// All fields zero with u1_D = 0: the solution stays zero.
inline ScenarioInstance zero_scenario(const GridSpec& g) {
  ModelParams p;
  p.u1_d = 0.0;
  return {p, State(g), {}};
}

/// H = 1, u1_D = 0 and vanishing reactions (alpha = beta = 0, k = 0): the
/// discrete energy is nonincreasing.
inline ModelParams dissipation_params() {
  ModelParams p;
  p.d1 = 0.05;
  p.d2 = 0.1;
  p.d3 = 0.08;
  p.bi_m = 0.7;
  p.henry = 1.0;
  p.u1_d = 0.0;
  p.k = 0.0;
  return p;
}

inline State smooth_bump_state(const GridSpec& g) {
  const double L = g.L(), ell = g.ell();
  State s(g);
  s.u1 = sample_macro(g, [&](double x) { return std::sin(std::numbers::pi * x / (2.0 * L)); });
  s.u2 = sample_micro(g, [&](double x, double y) { return 1.0 + 0.5 * std::cos(std::numbers::pi * x / L) * std::cos(std::numbers::pi * y / ell); });
  s.u3 = sample_micro(g, [&](double x, double y) { return 0.3 + 0.1 * x / L * (1.0 - std::cos(std::numbers::pi * y / ell)); });
  s.u4 = sample_macro(g, [&](double x) { return 0.2 + 0.1 * x / L; });
  s.u1[0] = 0.0;
  return s;
}

inline ScenarioInstance dissipation_scenario(const GridSpec& g) {
  return {dissipation_params(), smooth_bump_state(g), {}};
}

/// Bi_M = 0 and vanishing reactions: the micro masses are conserved.
inline ModelParams conservation_params() {
  ModelParams p = dissipation_params();
  p.bi_m = 0.0;
  p.henry = 1.3;
  p.u1_d = 0.4;
  return p;
}

inline ScenarioInstance conservation_scenario(const GridSpec& g) {
  return {conservation_params(), smooth_bump_state(g), {}};
}

/// Macro diffusion only (no exchange, no reactions): u1 follows the discrete
/// heat equation.
inline ScenarioInstance heat_scenario(const GridSpec& g) {
  ModelParams p = dissipation_params();
  p.bi_m = 0.0;
  return {p, smooth_bump_state(g), {}};
}

inline const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{"fig1", "zero", "heat", "dissipation", "conservation"};
  return names;
}

/// Default parameters of a named scenario.
inline ModelParams scenario_params(const std::string& name) {
  if (name == "fig1") return fig1_params();
  if (name == "zero") return zero_scenario(make_grid(1.0, 1.0, 2, 2)).params;
  if (name == "heat") return heat_scenario(make_grid(1.0, 1.0, 2, 2)).params;
  if (name == "dissipation") return dissipation_params();
  if (name == "conservation") return conservation_params();
  throw UnknownScenario("unknown scenario '" + name + "'");
}

/// Factory for a named scenario. The scenario supplies the initial data;
/// `params` replaces its default parameters when given.
inline ScenarioFactory scenario_factory(const std::string& name, const ModelParams* params = nullptr) {
  const ModelParams p = params ? *params : scenario_params(name);
  if (name == "fig1") return [p](const GridSpec& g) { return fig1_scenario(g, p); };
  if (name == "zero") return [p](const GridSpec& g) { return ScenarioInstance{p, State(g), {}}; };
  if (name == "heat" || name == "dissipation" || name == "conservation")
    return [p](const GridSpec& g) { return ScenarioInstance{p, smooth_bump_state(g), {}}; };
  throw UnknownScenario("unknown scenario '" + name + "'");
}

}  // namespace twoscale
