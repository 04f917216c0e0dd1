/**
 * @file mms.hpp
 * @brief Manufactured solutions and grid-convergence studies.
 *
 * A manufactured solution supplies closed-form fields that satisfy all
 * boundary conditions of the shifted problem exactly, together with the
 * volume sources that make them solve the system. The convergence driver runs
 * the semi-discrete scheme on a sequence of grids and tabulates discrete L2
 * errors at the final time.
 */
#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "twoscale/diagnostics.hpp"

namespace twoscale {

class ManufacturedSolution {
 public:
  virtual ~ManufacturedSolution() = default;
  virtual const ModelParams& params() const = 0;
  /// Shifted gas concentration u1~ = u1 - u1_D.
  virtual double u1(double x, double t) const = 0;
  virtual double u2(double x, double y, double t) const = 0;
  virtual double u3(double x, double y, double t) const = 0;
  virtual double u4(double x, double t) const = 0;
  virtual SourceTerms sources() const = 0;

  State exact_state(const GridSpec& g, double t) const {
    State s(g);
    s.t = t;
    s.u1 = sample_macro(g, [&](double x) { return u1(x, t); });
    s.u2 = sample_micro(g, [&](double x, double y) { return u2(x, y, t); });
    s.u3 = sample_micro(g, [&](double x, double y) { return u3(x, y, t); });
    s.u4 = sample_macro(g, [&](double x) { return u4(x, t); });
    s.u1[0] = 0.0;
    return s;
  }
};

/// Fields constant in space and time that solve the system with zero sources:
/// u1~ = 0, u2 = H u1_D, u3 = c3, u4 = M4 with the linear-decay Q (so eta = 0)
/// and alpha = beta = 0.
class ConstantSolution final : public ManufacturedSolution {
 public:
  explicit ConstantSolution(ModelParams p, double c3 = 0.3) : p_(std::move(p)), c3_(c3) {
    if (p_.q_kernel.kind != QKernel::Kind::linear_decay)
      throw ParameterError("A3", "constant manufactured solution needs the linear-decay Q kernel");
    if (!p_.alpha.is_constant() || !p_.beta.is_constant() || p_.alpha.constant_value() != 0.0 ||
        p_.beta.constant_value() != 0.0)
      throw ParameterError("A2", "constant manufactured solution needs alpha = beta = 0");
  }
  const ModelParams& params() const override { return p_; }
  double u1(double, double) const override { return 0.0; }
  double u2(double, double, double) const override { return p_.henry * p_.u1_d; }
  double u3(double, double, double) const override { return c3_; }
  double u4(double, double) const override { return p_.q_kernel.m4; }
  SourceTerms sources() const override { return {}; }

 private:
  ModelParams p_;
  double c3_;
};

/// Smooth separable solution compatible with every boundary condition:
///   u1~ = a(t) sin(pi x / 2L)
///   u2  = H (u1~ + u1_D) + c(x,t) (1 - cos(pi y / ell))     (Robin at y=0 has zero exchange)
///   u3  = p(x,t) (1 - kappa y^2 / (2 ell)),  kappa = k c_bar / (d3 + k c_bar ell / 2)
///   u4  = w(x,t)
/// Requires R = identity and Q = constant so that the flux condition at
/// y = ell is linear. With `x_dependent == false` every field is independent of
/// x (and u1~ = 0), which isolates the micro discretization error.
class SeparableSolution final : public ManufacturedSolution {
 public:
  SeparableSolution(ModelParams p, double L, double ell, bool x_dependent = true)
      : p_(std::move(p)), L_(L), ell_(ell), xdep_(x_dependent) {
    if (p_.r_kernel.kind != RKernel::Kind::identity || p_.q_kernel.kind != QKernel::Kind::constant)
      throw ParameterError("A3", "separable manufactured solution needs R = identity and constant Q");
    if (!p_.alpha.is_constant() || !p_.beta.is_constant())
      throw ParameterError("A2", "separable manufactured solution needs constant alpha, beta");
    if (!(p_.d3 > 0.0)) throw ParameterError("A1", "separable manufactured solution needs d3 > 0");
    const double kc = p_.k * p_.q_kernel.c_bar;
    kappa_ = kc / (p_.d3 + 0.5 * kc * ell_);
  }

  const ModelParams& params() const override { return p_; }

  double u1(double x, double t) const override { return a(t) * sx(x); }
  double u2(double x, double y, double t) const override {
    return p_.henry * (u1(x, t) + p_.u1_d) + c(x, t) * (1.0 - std::cos(pi * y / ell_));
  }
  double u3(double x, double y, double t) const override { return pf(x, t) * phi(y); }
  double u4(double x, double t) const override { return w(x, t); }

  SourceTerms sources() const override {
    SourceTerms s;
    const double d1 = p_.d1, d2 = p_.d2, d3 = p_.d3, H = p_.henry;
    const double alpha = p_.alpha.constant_value(), beta = p_.beta.constant_value();
    const double kx = pi / (2.0 * L_), ky = pi / ell_;
    // Exchange term vanishes because u2|_{y=0} = H (u1~ + u1_D).
    s.f1 = [=, this](double x, double t) { return (a_t(t) + d1 * kx * kx * a(t)) * sx(x); };
    s.f2 = [=, this](double x, double y, double t) {
      const double dt = H * a_t(t) * sx(x) + c_t(x, t) * (1.0 - std::cos(ky * y));
      const double lap = c(x, t) * ky * ky * std::cos(ky * y);
      return dt - d2 * lap + zeta(u2(x, y, t), u3(x, y, t), alpha, beta);
    };
    s.f3 = [=, this](double x, double y, double t) {
      const double dt = pf_t(x, t) * phi(y);
      const double lap = -pf(x, t) * kappa_ / ell_;
      return dt - d3 * lap - zeta(u2(x, y, t), u3(x, y, t), alpha, beta);
    };
    s.f4 = [this](double x, double t) { return w_t(x, t) - eta(u3(x, ell_, t), u4(x, t), p_); };
    return s;
  }

 private:
  static constexpr double pi = std::numbers::pi;

  double sx(double x) const { return std::sin(pi * x / (2.0 * L_)); }
  double xs(double x) const { return xdep_ ? x / L_ : 0.0; }  // scaled x for the micro profiles
  double phi(double y) const { return 1.0 - kappa_ * y * y / (2.0 * ell_); }

  double a(double t) const { return xdep_ ? 0.5 + 0.25 * std::sin(t) : 0.0; }
  double a_t(double t) const { return xdep_ ? 0.25 * std::cos(t) : 0.0; }
  double c(double x, double t) const { return (0.4 + 0.2 * std::cos(pi * xs(x))) * std::exp(-0.5 * t); }
  double c_t(double x, double t) const { return -0.5 * c(x, t); }
  double pf(double x, double t) const { return (1.0 + 0.5 * xs(x) * xs(x)) * (1.0 + 0.3 * t); }
  double pf_t(double x, double) const { return 0.3 * (1.0 + 0.5 * xs(x) * xs(x)); }
  double w(double x, double t) const { return (0.2 + 0.1 * std::cos(pi * xs(x))) * (1.0 + t); }
  double w_t(double x, double) const { return 0.2 + 0.1 * std::cos(pi * xs(x)); }

  ModelParams p_;
  double L_;
  double ell_;
  bool xdep_;
  double kappa_ = 0.0;
};

enum class Refinement { both, y_only };

struct ConvergenceRow {
  int level = 0;
  int nx = 0;
  int ny = 0;
  std::array<double, 4> error{};  ///< discrete L2 errors of u1~, u2, u3, u4 at t_end
  std::array<double, 4> order{};  ///< log2(e_{k-1}/e_k), NaN on the first level or for a zero error
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  /// Smallest order of field f over all levels after the first.
  double min_order(std::size_t f) const {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < rows.size(); ++k) m = std::min(m, rows[k].order[f]);
    return m;
  }
};

class ConvergenceError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline ConvergenceTable mms_convergence(const ManufacturedSolution& ms, const GridSpec& base, int levels,
                                        const TimeSpec& ts, Refinement mode = Refinement::both) {
  if (levels < 2) throw ConvergenceError("a convergence study needs at least 2 levels");
  const ModelParams& p = ms.params();
  const SourceTerms src = ms.sources();
  ConvergenceTable table;
  TimeSpec run = ts;
  run.snapshot_times = {ts.t_end};
  for (int k = 0; k < levels; ++k) {
    const int nx = mode == Refinement::both ? base.nx() << k : base.nx();
    const GridSpec g = make_grid(base.L(), base.ell(), nx, base.ny() << k);
    const Trajectory traj = integrate(ms.exact_state(g, 0.0), p, g, run, &src);
    const State& num = traj.snapshots.back();
    const State exact = ms.exact_state(g, ts.t_end);
    auto diff_macro = [&](const MacroField& a, const MacroField& b) {
      MacroField d = a;
      for (std::size_t i = 0; i < d.size(); ++i) d[i] -= b[i];
      return norm_macro(g, d);
    };
    auto diff_micro = [&](const MicroField& a, const MicroField& b) {
      MicroField d = a;
      for (std::size_t i = 0; i < d.size(); ++i) d.raw()[i] -= b.raw()[i];
      return norm_micro(g, d);
    };
    ConvergenceRow row;
    row.level = k;
    row.nx = g.nx();
    row.ny = g.ny();
    row.error = {diff_macro(num.u1, exact.u1), diff_micro(num.u2, exact.u2), diff_micro(num.u3, exact.u3),
                 diff_macro(num.u4, exact.u4)};
    for (std::size_t f = 0; f < 4; ++f)
      row.order[f] = k == 0 || row.error[f] == 0.0 ? std::numeric_limits<double>::quiet_NaN()
                                                   : std::log2(table.rows.back().error[f] / row.error[f]);
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace twoscale
