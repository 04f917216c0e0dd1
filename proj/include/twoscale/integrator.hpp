/**
 * @file integrator.hpp
 * @brief Method-of-lines time stepping for the semi-discrete system.
 *
 * Two explicit schemes are provided: classical RK4 with a fixed step bounded
 * by the diffusion stability limit, and the Dormand-Prince 5(4) pair with a PI
 * step-size controller. The Dirichlet node of u1 is re-pinned after every
 * stage. Steps are truncated so that every requested snapshot time is hit
 * exactly.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "twoscale/model.hpp"

namespace twoscale {

enum class StepMode { fixed, adaptive };

struct TimeSpec {
  double t_end = 1.0;
  StepMode mode = StepMode::fixed;
  std::optional<double> dt;  ///< fixed step; defaults to stability_dt
  double rtol = 1e-6;
  double atol = 1e-9;
  std::vector<double> snapshot_times;  ///< sorted, within [0, t_end]; empty means {0, t_end}
};

struct StepStats {
  long accepted = 0;
  long rejected = 0;
  long rhs_evals = 0;
  double final_dt = 0.0;
  double min_dt = std::numeric_limits<double>::infinity();
  double max_dt = 0.0;
};

struct Trajectory {
  std::vector<State> snapshots;
  StepStats stats;
};

class TimeSpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown on NaN/Inf in the state; carries the last finite state.
class DivergedError : public std::runtime_error {
 public:
  DivergedError(const std::string& what, State last_good) : std::runtime_error(what), last_good_(std::move(last_good)) {}
  const State& last_good() const { return last_good_; }

 private:
  State last_good_;
};

class StepUnderflow : public DivergedError {
 public:
  using DivergedError::DivergedError;
};

constexpr double kStabilitySafety = 0.4;

/// safety * min(h_x^2 / (2 d1), h_y^2 / (2 max(d2, d3))). Infinite when all
/// diffusivities vanish.
inline double stability_dt(const ModelParams& p, const GridSpec& g) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  const double macro = p.d1 > 0.0 ? g.hx() * g.hx() / (2.0 * p.d1) : inf;
  const double dmax = std::max(p.d2, p.d3);
  const double micro = dmax > 0.0 ? g.hy() * g.hy() / (2.0 * dmax) : inf;
  return kStabilitySafety * std::min(macro, micro);
}

/// Called after every accepted step with the new state.
using StepObserver = std::function<void(const State&)>;

namespace detail {

inline void axpy(State& y, double a, const State& x) {
  auto yi = std::array{&y.u1.raw(), &y.u2.raw(), &y.u3.raw(), &y.u4.raw()};
  auto xi = std::array{&x.u1.raw(), &x.u2.raw(), &x.u3.raw(), &x.u4.raw()};
  for (std::size_t c = 0; c < 4; ++c) {
    auto& yv = *yi[c];
    const auto& xv = *xi[c];
    for (std::size_t n = 0; n < yv.size(); ++n) yv[n] += a * xv[n];
  }
}

/// y = base + dt * sum_k coef[k] * stages[k]
inline void combine(State& y, const State& base, double dt, std::span<const double> coef,
                    std::span<const State> stages) {
  y.u1.raw() = base.u1.raw();
  y.u2.raw() = base.u2.raw();
  y.u3.raw() = base.u3.raw();
  y.u4.raw() = base.u4.raw();
  for (std::size_t k = 0; k < coef.size(); ++k)
    if (coef[k] != 0.0) axpy(y, dt * coef[k], stages[k]);
  y.u1[0] = 0.0;
}

inline std::vector<double> resolve_snapshots(const TimeSpec& ts) {
  if (!(ts.t_end > 0.0) || !std::isfinite(ts.t_end)) throw TimeSpecError("t_end must be positive");
  std::vector<double> snaps = ts.snapshot_times.empty() ? std::vector<double>{0.0, ts.t_end} : ts.snapshot_times;
  if (!std::is_sorted(snaps.begin(), snaps.end())) throw TimeSpecError("snapshot times must be sorted");
  if (snaps.front() < 0.0 || snaps.back() > ts.t_end) throw TimeSpecError("snapshot times must lie in [0, T]");
  if (std::adjacent_find(snaps.begin(), snaps.end()) != snaps.end())
    throw TimeSpecError("snapshot times must be distinct");
  return snaps;
}

inline void check_finite(const State& y, const State& last_good, double t) {
  if (!y.all_finite()) throw DivergedError("non-finite state at t = " + std::to_string(t), last_good);
}

}  // namespace detail

/// Integrates from state0.t to timespec.t_end and returns the states at the
/// requested snapshot times (snapshots before state0.t are not allowed).
inline Trajectory integrate(State state0, const ModelParams& p, const GridSpec& g, const TimeSpec& ts,
                            const SourceTerms* src = nullptr, const StepObserver& observer = {}) {
  if (!state0.matches(g)) throw ShapeMismatch("integrate: initial state does not match the grid");
  validate(p, &g, Validation::degenerate);
  const std::vector<double> snaps = detail::resolve_snapshots(ts);
  if (snaps.front() < state0.t) throw TimeSpecError("snapshot before the initial time");

  const double limit = stability_dt(p, g);
  double dt = 0.0;
  if (ts.mode == StepMode::fixed) {
    dt = ts.dt.value_or(limit);
    if (!(dt > 0.0)) throw TimeSpecError("fixed step must be positive");
    if (dt > limit * (1.0 + 1e-12))
      throw TimeSpecError("fixed step " + std::to_string(dt) + " exceeds the stability limit " + std::to_string(limit));
  } else {
    if (!(ts.rtol > 0.0) || !(ts.atol > 0.0)) throw TimeSpecError("rtol and atol must be positive");
    dt = ts.dt.value_or(std::isfinite(limit) ? limit : ts.t_end / 100.0);
  }

  Trajectory traj;
  StepStats& st = traj.stats;
  State y = std::move(state0);
  y.u1[0] = 0.0;
  State ynew(g), tmp(g);
  std::vector<State> k(7, State(g));

  auto f = [&](const State& s, State& out) {
    rhs_into(s, p, g, src, out);
    ++st.rhs_evals;
  };
  auto record_step = [&](double h) {
    ++st.accepted;
    st.min_dt = std::min(st.min_dt, h);
    st.max_dt = std::max(st.max_dt, h);
    st.final_dt = h;
  };

  // Dormand-Prince 5(4) tableau.
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr std::array<double, 1> a2{1.0 / 5};
  static constexpr std::array<double, 2> a3{3.0 / 40, 9.0 / 40};
  static constexpr std::array<double, 3> a4{44.0 / 45, -56.0 / 15, 32.0 / 9};
  static constexpr std::array<double, 4> a5{19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729};
  static constexpr std::array<double, 5> a6{9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656};
  static constexpr std::array<double, 6> b5{35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84};
  // b5 - b4 (error weights), including the FSAL stage 7.
  static constexpr std::array<double, 7> e{71.0 / 57600,      0.0, -71.0 / 16695, 71.0 / 1920,
                                           -17253.0 / 339200, 22.0 / 525, -1.0 / 40};
  static constexpr std::array<double, 4> rk4_b{1.0 / 6, 1.0 / 3, 1.0 / 3, 1.0 / 6};

  auto rk4_step = [&](double h) {
    const double t = y.t;
    f(y, k[0]);
    tmp.t = t + 0.5 * h;
    detail::combine(tmp, y, 0.5 * h, std::array{1.0}, std::span(k).first(1));
    f(tmp, k[1]);
    detail::combine(tmp, y, 0.5 * h, std::array{0.0, 1.0}, std::span(k).first(2));
    f(tmp, k[2]);
    tmp.t = t + h;
    detail::combine(tmp, y, h, std::array{0.0, 0.0, 1.0}, std::span(k).first(3));
    f(tmp, k[3]);
    detail::combine(ynew, y, h, rk4_b, std::span(k).first(4));
    ynew.t = t + h;
  };

  bool fsal_valid = false;  // k[0] holds f(y)
  // Takes a DP step into ynew and returns the scaled RMS error norm.
  auto dp_step = [&](double h) {
    const double t = y.t;
    if (!fsal_valid) f(y, k[0]);
    auto stage = [&](int idx, double c, std::span<const double> a) {
      tmp.t = t + c * h;
      detail::combine(tmp, y, h, a, std::span(k).first(a.size()));
      f(tmp, k[static_cast<std::size_t>(idx)]);
    };
    stage(1, c2, a2);
    stage(2, c3, a3);
    stage(3, c4, a4);
    stage(4, c5, a5);
    stage(5, 1.0, a6);
    detail::combine(ynew, y, h, b5, std::span(k).first(6));
    ynew.t = t + h;
    f(ynew, k[6]);
    // error estimate
    double sum = 0.0;
    std::size_t count = 0;
    auto yc = std::array{&y.u1.raw(), &y.u2.raw(), &y.u3.raw(), &y.u4.raw()};
    auto nc = std::array{&ynew.u1.raw(), &ynew.u2.raw(), &ynew.u3.raw(), &ynew.u4.raw()};
    for (std::size_t c = 0; c < 4; ++c) {
      const auto& a = *yc[c];
      const auto& b = *nc[c];
      std::array<const std::vector<double>*, 7> ks{};
      for (std::size_t s = 0; s < 7; ++s) {
        const State& ksr = k[s];
        ks[s] = c == 0 ? &ksr.u1.raw() : c == 1 ? &ksr.u2.raw() : c == 2 ? &ksr.u3.raw() : &ksr.u4.raw();
      }
      for (std::size_t n = 0; n < a.size(); ++n) {
        double err = 0.0;
        for (std::size_t s = 0; s < 7; ++s)
          if (e[s] != 0.0) err += e[s] * (*ks[s])[n];
        err *= h;
        const double scale = ts.atol + ts.rtol * std::max(std::abs(a[n]), std::abs(b[n]));
        sum += (err / scale) * (err / scale);
        ++count;
      }
    }
    return std::sqrt(sum / static_cast<double>(count));
  };

  double err_prev = 1e-4;
  auto snap_it = snaps.begin();
  while (snap_it != snaps.end() && *snap_it <= y.t + 1e-12 * std::max(1.0, std::abs(y.t))) {
    traj.snapshots.push_back(y);
    traj.snapshots.back().t = *snap_it;
    ++snap_it;
  }

  for (; snap_it != snaps.end(); ++snap_it) {
    const double target = *snap_it;
    if (ts.mode == StepMode::fixed) {
      // Equal steps no larger than dt that land on the target.
      const double span = target - y.t;
      const double nsteps = std::max(1.0, std::ceil(span / dt - 1e-9));
      const double h = span / nsteps;
      const double t0 = y.t;
      for (long n = 1; n <= static_cast<long>(nsteps); ++n) {
        rk4_step(h);
        ynew.t = n == static_cast<long>(nsteps) ? target : t0 + n * h;
        detail::check_finite(ynew, y, ynew.t);
        std::swap(y, ynew);
        record_step(h);
        if (observer) observer(y);
      }
    } else {
      while (y.t < target) {
        const double remaining = target - y.t;
        const bool last = dt >= remaining * (1.0 - 1e-12);
        const double h = last ? remaining : dt;
        if (h < 1e-14 * std::max(1.0, std::abs(y.t)))
          throw StepUnderflow("step size underflow at t = " + std::to_string(y.t), y);
        const double err = dp_step(h);
        if (!ynew.all_finite()) {
          ++st.rejected;
          fsal_valid = true;  // k[0] still belongs to y
          dt = 0.25 * h;
          if (dt < 1e-14 * std::max(1.0, std::abs(y.t)))
            throw DivergedError("non-finite state at t = " + std::to_string(y.t), y);
          continue;
        }
        if (err <= 1.0) {
          // PI controller (Gustafsson): exponents 0.7/5 and 0.4/5.
          double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.7 / 5.0) * std::pow(err_prev, 0.4 / 5.0);
          fac = std::clamp(fac, 0.2, 5.0);
          err_prev = std::max(err, 1e-4);
          if (last) ynew.t = target;
          std::swap(y, ynew);
          std::swap(k[0], k[6]);
          fsal_valid = true;
          record_step(h);
          if (observer) observer(y);
          // A truncated final step does not shrink the controller's step.
          dt = last ? std::max(dt, h * fac) : h * fac;
        } else {
          ++st.rejected;
          fsal_valid = true;
          dt = h * std::max(0.2, 0.9 * std::pow(err, -1.0 / 5.0));
        }
      }
    }
    traj.snapshots.push_back(y);
  }
  if (st.accepted == 0) st.min_dt = 0.0;
  return traj;
}

}  // namespace twoscale
