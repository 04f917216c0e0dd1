/**
 * @file diagnostics.hpp
 * @brief Norms from the a-priori energy, time-derivative and mixed difference
 *        quotient estimates, evaluated along trajectories and across grid
 *        refinements.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "twoscale/integrator.hpp"

namespace twoscale {

struct EnergyRecord {
  double t = 0.0;
  double n1 = 0.0, n2 = 0.0, n3 = 0.0, n4 = 0.0;  ///< squared L2 norms of u1~, u2, u3, u4
  double g1 = 0.0, g2 = 0.0, g3 = 0.0;            ///< squared gradient norms

  double total() const { return n1 + n2 + n3 + n4; }
};

struct DerivativeRecord {
  double t = 0.0;
  double d1n = 0.0, d2n = 0.0, d3n = 0.0, d4n = 0.0;  ///< squared norms of the tendencies
  double dg1 = 0.0, dg2 = 0.0, dg3 = 0.0;             ///< squared gradient norms of the tendencies
};

struct MixedQuotientRecord {
  double t = 0.0;
  double mx2 = 0.0, mx3 = 0.0;    ///< h_x h_y sum_{i<N_x} sum_{j<=N_y} (d+_x u)^2
  double mxy2 = 0.0, mxy3 = 0.0;  ///< h_x h_y sum_{i<N_x} sum_{j<N_y} (d+_x d+_y u)^2
};

inline EnergyRecord energy_record(const State& s, const GridSpec& g) {
  EnergyRecord r;
  r.t = s.t;
  r.n1 = ip_macro(g, s.u1, s.u1);
  r.n2 = ip_micro(g, s.u2, s.u2);
  r.n3 = ip_micro(g, s.u3, s.u3);
  r.n4 = ip_macro(g, s.u4, s.u4);
  const auto e1 = grad_macro(g, s.u1);
  const auto e2 = grad_micro(g, s.u2);
  const auto e3 = grad_micro(g, s.u3);
  r.g1 = ip_macro_edge(g, e1, e1);
  r.g2 = ip_micro_edge(g, e2, e2);
  r.g3 = ip_micro_edge(g, e3, e3);
  return r;
}

/// Tendencies come from the right-hand side, not from differencing snapshots.
inline DerivativeRecord derivative_record(const State& s, const ModelParams& p, const GridSpec& g,
                                          const SourceTerms* src = nullptr) {
  const State du = rhs(s, p, g, src);
  const EnergyRecord e = energy_record(du, g);
  return {s.t, e.n1, e.n2, e.n3, e.n4, e.g1, e.g2, e.g3};
}

namespace detail {
inline void mixed_sums(const GridSpec& g, const MicroField& u, double& mx, double& mxy) {
  const std::size_t nx = static_cast<std::size_t>(g.nx());
  const std::size_t ny = static_cast<std::size_t>(g.ny());
  const double hx = g.hx(), hy = g.hy();
  double sx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j <= ny; ++j) {
      const double dx = (u(i + 1, j) - u(i, j)) / hx;
      sx += dx * dx;
      if (j < ny) {
        const double dxy = ((u(i + 1, j + 1) - u(i, j + 1)) - (u(i + 1, j) - u(i, j))) / (hx * hy);
        sxy += dxy * dxy;
      }
    }
  }
  mx = hx * hy * sx;
  mxy = hx * hy * sxy;
}
}  // namespace detail

/// Sums over the full index ranges, no cutoff.
inline MixedQuotientRecord mixed_quotient_record(const State& s, const GridSpec& g) {
  MixedQuotientRecord r;
  r.t = s.t;
  detail::mixed_sums(g, s.u2, r.mx2, r.mxy2);
  detail::mixed_sums(g, s.u3, r.mx3, r.mxy3);
  return r;
}

// ---------------------------------------------------------------------------
// Refinement sweeps

/// A problem instance on a given grid: parameters, initial state and optional
/// sources.
struct ScenarioInstance {
  ModelParams params;
  State initial;
  SourceTerms sources;
};

using ScenarioFactory = std::function<ScenarioInstance(const GridSpec&)>;

/// Names of the monitored quantities, in column order. Each quantity is
/// tracked both as sup over the snapshots and as a trapezoid time integral.
inline const std::vector<std::string>& monitored_names() {
  static const std::vector<std::string> names{"n1",  "n2",  "n3",  "n4",  "g1",  "g2",  "g3",  "d1n",  "d2n",
                                              "d3n", "dg1", "dg2", "dg3", "mx2", "mx3", "mxy2", "mxy3"};
  return names;
}

inline std::vector<double> monitored_values(const State& s, const ModelParams& p, const GridSpec& g,
                                            const SourceTerms* src) {
  const EnergyRecord e = energy_record(s, g);
  const DerivativeRecord d = derivative_record(s, p, g, src);
  const MixedQuotientRecord m = mixed_quotient_record(s, g);
  return {e.n1, e.n2, e.n3, e.n4, e.g1, e.g2, e.g3, d.d1n, d.d2n, d.d3n, d.dg1, d.dg2, d.dg3,
          m.mx2, m.mx3, m.mxy2, m.mxy3};
}

struct SweepLevel {
  int nx = 0;
  int ny = 0;
  std::vector<double> sup;       ///< per monitored quantity
  std::vector<double> integral;  ///< per monitored quantity
  StepStats stats;
};

struct SweepResult {
  std::vector<SweepLevel> levels;
  double ratio_threshold = 1.25;

  /// Ratio of level k+1 to level k for quantity q (sup or integral). A zero
  /// denominator yields 1 when the numerator is also zero.
  static double ratio(double coarse, double fine) {
    if (coarse == 0.0) return fine == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    return fine / coarse;
  }
  double max_ratio(bool integral) const {
    double worst = 0.0;
    for (std::size_t k = 0; k + 1 < levels.size(); ++k) {
      const auto& a = integral ? levels[k].integral : levels[k].sup;
      const auto& b = integral ? levels[k + 1].integral : levels[k + 1].sup;
      for (std::size_t q = 0; q < a.size(); ++q) worst = std::max(worst, ratio(a[q], b[q]));
    }
    return worst;
  }
  /// Largest consecutive-level ratio over all quantities and both reductions.
  double max_growth() const { return std::max(max_ratio(false), max_ratio(true)); }
  bool passed() const { return max_growth() <= ratio_threshold; }
};

class SweepError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Runs the scenario on `grids` (each one a refinement of the previous) and
/// reduces every monitored quantity over the snapshot times of `ts`.
inline SweepResult refinement_sweep(const ScenarioFactory& scenario, const std::vector<GridSpec>& grids,
                                    const TimeSpec& ts, double ratio_threshold = 1.25) {
  if (grids.size() < 3) throw SweepError("a refinement sweep needs at least 3 levels");
  SweepResult out;
  out.ratio_threshold = ratio_threshold;
  for (const GridSpec& g : grids) {
    ScenarioInstance inst = scenario(g);
    const Trajectory traj = integrate(inst.initial, inst.params, g, ts, &inst.sources);
    SweepLevel lvl;
    lvl.nx = g.nx();
    lvl.ny = g.ny();
    lvl.stats = traj.stats;
    const std::size_t nq = monitored_names().size();
    lvl.sup.assign(nq, 0.0);
    lvl.integral.assign(nq, 0.0);
    std::vector<double> prev;
    double t_prev = 0.0;
    for (const State& s : traj.snapshots) {
      const std::vector<double> v = monitored_values(s, inst.params, g, &inst.sources);
      for (std::size_t q = 0; q < nq; ++q) {
        lvl.sup[q] = std::max(lvl.sup[q], v[q]);
        if (!prev.empty()) lvl.integral[q] += 0.5 * (s.t - t_prev) * (v[q] + prev[q]);
      }
      prev = v;
      t_prev = s.t;
    }
    out.levels.push_back(std::move(lvl));
  }
  return out;
}

/// (N_x, N_y) * 2^k for k = 0..levels-1.
inline std::vector<GridSpec> refinement_grids(const GridSpec& base, int levels) {
  std::vector<GridSpec> out;
  for (int k = 0; k < levels; ++k) out.push_back(make_grid(base.L(), base.ell(), base.nx() << k, base.ny() << k));
  return out;
}

}  // namespace twoscale
