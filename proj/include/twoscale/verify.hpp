/**
 * @file verify.hpp
 * @brief Property suites: summation by parts, trace bound, extension
 *        identities, dissipation, conservation, positivity, gypsum
 *        monotonicity, front formation and refinement boundedness.
 *
 * Every suite reduces to one scalar (its worst residual) compared against a
 * fixed threshold. Randomized suites draw from a seeded mt19937_64.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "twoscale/interpolation.hpp"
#include "twoscale/scenarios.hpp"

namespace twoscale {

struct SuiteResult {
  std::string name;
  double max_residual = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::string detail;
};

struct VerifyOptions {
  std::uint64_t seed = 42;
  double L = 2.0;
  double ell = 0.5;
  std::vector<int> green_sizes{4, 8, 16, 32};
  int green_trials = 200;
  int trace_n = 16;
  int trace_trials = 100;
  std::vector<int> extension_sizes{4, 8, 16};
  int extension_trials = 100;
  int evolution_n = 16;
  double evolution_t_end = 10.0;
  int fig1_n = 16;
  int sweep_levels = 3;
  double sweep_threshold = 1.25;
};

/// Rule producing the ghost edges of grad_yh w from a closure. The default is
/// gradient_ghosts; tests substitute faulty rules.
using GhostRule = std::function<MicroEdgeGhosts(const GridSpec&, const MicroField&, const GhostClosure&)>;

namespace detail {

inline double uniform(std::mt19937_64& rng) { return std::uniform_real_distribution<double>(-1.0, 1.0)(rng); }

template <class Field>
void randomize(Field& f, std::mt19937_64& rng) {
  for (double& v : f.raw()) v = uniform(rng);
}

inline SuiteResult finish(std::string name, double worst, double threshold, std::string detail = {}) {
  return {std::move(name), worst, threshold, worst <= threshold, std::move(detail)};
}

}  // namespace detail

/// Macro summation by parts on random u (u_0 = 0) and v with the reflected
/// ghost edge. Residuals are scaled by 1 + ||u|| ||v||.
inline SuiteResult suite_green_macro(const VerifyOptions& o) {
  std::mt19937_64 rng(o.seed);
  double worst = 0.0;
  for (int n : o.green_sizes) {
    const GridSpec g = make_grid(o.L, o.ell, n, n);
    for (int t = 0; t < o.green_trials; ++t) {
      MacroField u(g);
      MacroEdgeField v(g);
      detail::randomize(u, rng);
      detail::randomize(v, rng);
      u[0] = 0.0;
      const double r = green_macro_residual(g, u, v, -v[v.size() - 1]);
      worst = std::max(worst, r / (1.0 + norm_macro(g, u) * norm_macro_edge(g, v)));
    }
  }
  return detail::finish("green_macro", worst, 1e-12);
}

/// Micro summation by parts with v = grad_yh w, where the ghost edges of v
/// come from `rule` applied to a random flux closure of w.
inline SuiteResult suite_green_micro(const VerifyOptions& o, const GhostRule& rule = gradient_ghosts) {
  std::mt19937_64 rng(o.seed + 1);
  double worst = 0.0;
  for (int n : o.green_sizes) {
    const GridSpec g = make_grid(o.L, o.ell, n, n);
    for (int t = 0; t < o.green_trials; ++t) {
      MicroField u(g), w(g);
      GhostClosure c = GhostClosure::neumann(g);
      detail::randomize(u, rng);
      detail::randomize(w, rng);
      detail::randomize(c.delta1, rng);
      detail::randomize(c.delta2, rng);
      const MicroEdgeField v = grad_micro(g, w);
      const double r = green_micro_defect(g, u, v, rule(g, w, c), c.delta1, c.delta2);
      worst = std::max(worst, r / (1.0 + norm_micro(g, u) * norm_micro_edge(g, v)));
    }
  }
  return detail::finish("green_micro", worst, 1e-12);
}

/// Trace bound on random micro fields. The residual is the largest
/// lhs / rhs; a violation means a ratio above 1.
inline SuiteResult suite_trace(const VerifyOptions& o) {
  std::mt19937_64 rng(o.seed + 2);
  const GridSpec g = make_grid(o.L, o.ell, o.trace_n, o.trace_n);
  double worst = 0.0;
  int violations = 0;
  for (int t = 0; t < o.trace_trials; ++t) {
    MicroField u(g);
    detail::randomize(u, rng);
    const TraceBound b = trace_inequality_check(g, u);
    if (!b.holds()) ++violations;
    worst = std::max(worst, b.lhs / b.rhs);
  }
  SuiteResult r = detail::finish("trace", worst, 1.0, std::to_string(violations) + " violations");
  r.pass = violations == 0;
  return r;
}

/// The four extension identities, each relative to the Cauchy-Schwarz bound
/// of the discrete product.
inline std::vector<SuiteResult> suite_extensions(const VerifyOptions& o) {
  std::mt19937_64 rng(o.seed + 3);
  std::array<double, 4> worst{};
  for (int n : o.extension_sizes) {
    const GridSpec g = make_grid(o.L, o.ell, n, n);
    for (int t = 0; t < o.extension_trials; ++t) {
      MacroField u(g), v(g);
      MicroField U(g), V(g);
      detail::randomize(u, rng);
      detail::randomize(v, rng);
      detail::randomize(U, rng);
      detail::randomize(V, rng);
      const ExtensionResiduals r = extension_residuals(g, u, v, U, V);
      const std::array<double, 4> scale{
          norm_macro(g, u) * norm_macro(g, v),
          norm_macro_edge(g, grad_macro(g, u)) * norm_macro_edge(g, grad_macro(g, v)),
          norm_micro(g, U) * norm_micro(g, V),
          norm_micro_edge(g, grad_micro(g, U)) * norm_micro_edge(g, grad_micro(g, V))};
      const std::array<double, 4> res{r.pwc_macro, r.grad_macro, r.pwc_micro, r.grad_micro};
      for (std::size_t k = 0; k < 4; ++k)
        worst[k] = std::max(worst[k], res[k] / std::max(scale[k], std::numeric_limits<double>::min()));
    }
  }
  return {detail::finish("extension_pwc_macro", worst[0], 1e-12),
          detail::finish("extension_grad_macro", worst[1], 1e-12),
          detail::finish("extension_pwc_micro", worst[2], 1e-12),
          detail::finish("extension_grad_micro", worst[3], 1e-12)};
}

inline TimeSpec evolution_timespec(double t_end, int snapshots) {
  TimeSpec ts;
  ts.t_end = t_end;
  for (int k = 0; k <= snapshots; ++k) ts.snapshot_times.push_back(t_end * k / snapshots);
  ts.snapshot_times.back() = t_end;
  return ts;
}

/// Largest increase of the total energy between consecutive snapshots of the
/// dissipation scenario.
inline SuiteResult suite_dissipation(const VerifyOptions& o) {
  const GridSpec g = make_grid(o.L, o.ell, o.evolution_n, o.evolution_n);
  const ScenarioInstance s = dissipation_scenario(g);
  const Trajectory traj = integrate(s.initial, s.params, g, evolution_timespec(o.evolution_t_end, 40));
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < traj.snapshots.size(); ++k)
    worst = std::max(worst, energy_record(traj.snapshots[k], g).total() -
                                energy_record(traj.snapshots[k - 1], g).total());
  return detail::finish("dissipation", std::max(worst, 0.0), 1e-9);
}

/// Relative drift of the micro masses (u2, 1)_F and (u3, 1)_F.
inline SuiteResult suite_conservation(const VerifyOptions& o) {
  const GridSpec g = make_grid(o.L, o.ell, o.evolution_n, o.evolution_n);
  const ScenarioInstance s = conservation_scenario(g);
  const Trajectory traj = integrate(s.initial, s.params, g, evolution_timespec(o.evolution_t_end, 40));
  const MicroField one(g, 1.0);
  const double m2 = ip_micro(g, s.initial.u2, one), m3 = ip_micro(g, s.initial.u3, one);
  double worst = 0.0;
  for (const State& st : traj.snapshots) {
    worst = std::max(worst, std::abs(ip_micro(g, st.u2, one) - m2) / std::abs(m2));
    worst = std::max(worst, std::abs(ip_micro(g, st.u3, one) - m3) / std::abs(m3));
  }
  return detail::finish("conservation", worst, 1e-9);
}

inline Trajectory fig1_trajectory(const GridSpec& g, const ModelParams& p = fig1_params()) {
  TimeSpec ts;
  ts.t_end = 400.0;
  ts.snapshot_times = fig1_times();
  return integrate(fig1_initial(g, p), p, g, ts);
}

/// -min over snapshots of all unshifted fields (positive means a negative value).
inline SuiteResult suite_positivity(const Trajectory& traj, const ModelParams& p) {
  double lowest = std::numeric_limits<double>::infinity();
  for (const State& s : traj.snapshots) {
    for (double v : s.u1.values()) lowest = std::min(lowest, v + p.u1_d);
    for (const auto* f : {&s.u2, &s.u3})
      for (double v : f->raw()) lowest = std::min(lowest, v);
    for (double v : s.u4.values()) lowest = std::min(lowest, v);
  }
  return detail::finish("positivity", std::max(0.0, -lowest), 1e-8, "min = " + detail::fmt17(lowest));
}

/// Largest decrease of u4 at any node between consecutive snapshots.
inline SuiteResult suite_monotone_gypsum(const Trajectory& traj) {
  double worst = 0.0;
  for (std::size_t k = 1; k < traj.snapshots.size(); ++k) {
    const MacroField& a = traj.snapshots[k - 1].u4;
    const MacroField& b = traj.snapshots[k].u4;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, a[i] - b[i]);
  }
  return detail::finish("monotone_gypsum", worst, 1e-9);
}

/// First position where u4 drops below half of its sup; L if it never does.
inline double half_crossing(const GridSpec& g, const MacroField& u4) {
  const double sup = *std::max_element(u4.values().begin(), u4.values().end());
  for (std::size_t i = 0; i + 1 < u4.size(); ++i) {
    const double a = u4[i] - 0.5 * sup, b = u4[i + 1] - 0.5 * sup;
    if (a >= 0.0 && b < 0.0) return g.x(static_cast<int>(i)) + g.hx() * a / (a - b);
  }
  return g.L();
}

/// Gypsum front: for every snapshot with t >= 160, u4 at x = 0 lies within 5%
/// of its sup, u4 at x = L lies below 50% of its sup, and the 50% crossing does
/// not move backwards. The residual counts failed conditions.
inline SuiteResult suite_front(const GridSpec& g, const Trajectory& traj) {
  int failures = 0;
  double prev_crossing = -1.0;
  std::string log;
  for (const State& s : traj.snapshots) {
    if (s.t < 160.0) continue;
    const auto& v = s.u4.values();
    const double sup = *std::max_element(v.begin(), v.end());
    const bool saturated = sup > 0.0 && v.front() >= 0.95 * sup;
    const bool unsaturated = v.back() < 0.5 * sup;
    const double crossing = half_crossing(g, s.u4);
    const bool advancing = crossing >= prev_crossing;
    failures += !saturated + !unsaturated + !advancing;
    prev_crossing = crossing;
    log += "t=" + detail::fmt17(s.t) + " front=" + detail::fmt17(crossing) + ";";
  }
  return detail::finish("front", failures, 0.0, log);
}

inline SuiteResult suite_sweep(const VerifyOptions& o, SweepResult* out = nullptr) {
  TimeSpec ts;
  ts.t_end = 400.0;
  ts.snapshot_times = fig1_times();
  const GridSpec base = make_grid(1.0, 1.0, o.fig1_n, o.fig1_n);
  SweepResult r = refinement_sweep(scenario_factory("fig1"), refinement_grids(base, o.sweep_levels), ts,
                                   o.sweep_threshold);
  SuiteResult s = detail::finish("boundedness_sweep", r.max_growth(), o.sweep_threshold);
  if (out) *out = std::move(r);
  return s;
}

/// All suites in report order.
inline std::vector<SuiteResult> run_all_suites(const VerifyOptions& o) {
  std::vector<SuiteResult> out;
  out.push_back(suite_green_macro(o));
  out.push_back(suite_green_micro(o));
  out.push_back(suite_trace(o));
  for (SuiteResult& r : suite_extensions(o)) out.push_back(std::move(r));
  out.push_back(suite_dissipation(o));
  out.push_back(suite_conservation(o));
  const GridSpec g = make_grid(1.0, 1.0, o.fig1_n, o.fig1_n);
  const Trajectory traj = fig1_trajectory(g);
  out.push_back(suite_positivity(traj, fig1_params()));
  out.push_back(suite_monotone_gypsum(traj));
  out.push_back(suite_sweep(o));
  return out;
}

}  // namespace twoscale
