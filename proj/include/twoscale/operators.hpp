/**
 * @file operators.hpp
 * @brief Staggered difference operators, ghost-node closures, summation by
 *        parts residuals and the discrete trace inequality.
 *
 * Gradients map node functions to the staggered (edge) grid, divergences map
 * edge functions back to nodes. Values outside the grids are never stored in
 * the field arrays: callers pass them in explicitly (edge ghosts for the
 * divergence, a GhostClosure for the Laplacian).
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "twoscale/grid.hpp"

namespace twoscale {

/// Raised when a boundary operator is evaluated without the ghost data it
/// requires.
class MissingClosure : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when the inputs of an identity checker violate its hypotheses.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Flux data of a micro closure. Ghost rows follow
///   u_{i,-1}     = u_{i,1}      + 2 h_y delta1_i
///   u_{i,N_y+1}  = u_{i,N_y-1}  + 2 h_y delta2_i
/// so delta1 / delta2 are the outward normal derivatives at y = 0 / y = ell.
struct GhostClosure {
  double dirichlet0 = 0.0;
  MacroField delta1;
  MacroField delta2;

  /// Pure Neumann (zero flux) closure.
  static GhostClosure neumann(const GridSpec& g) { return {0.0, MacroField(g), MacroField(g)}; }
};

/// Values v_{i,-1/2} (lower) and v_{i,N_y+1/2} (upper) of a micro edge field.
struct MicroEdgeGhosts {
  MacroField lower;
  MacroField upper;
};

// ---------------------------------------------------------------------------
// Gradients

inline MacroEdgeField grad_macro(const GridSpec& g, const MacroField& u) {
  require_shape(g, u, "grad_macro");
  MacroEdgeField out(g);
  const double inv = 1.0 / g.hx();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (u[i + 1] - u[i]) * inv;
  return out;
}

inline MicroEdgeField grad_micro(const GridSpec& g, const MicroField& u) {
  require_shape(g, u, "grad_micro");
  MicroEdgeField out(g);
  const double inv = 1.0 / g.hy();
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) = (u(i, j + 1) - u(i, j)) * inv;
  return out;
}

// ---------------------------------------------------------------------------
// Divergences

/// Div_h: E_h -> G_h^o. Entry 0 is outside G_h^o and is returned as 0.
/// `upper_ghost` is v_{N_x+1/2}.
inline MacroField div_macro(const GridSpec& g, const MacroEdgeField& v, double upper_ghost) {
  require_shape(g, v, "div_macro");
  MacroField out(g);
  const std::size_t n = static_cast<std::size_t>(g.nx());
  const double inv = 1.0 / g.hx();
  for (std::size_t i = 1; i < n; ++i) out[i] = (v[i] - v[i - 1]) * inv;
  out[n] = (upper_ghost - v[n - 1]) * inv;
  return out;
}

inline MicroField div_micro(const GridSpec& g, const MicroEdgeField& v, const MicroEdgeGhosts& ghosts) {
  require_shape(g, v, "div_micro");
  if (ghosts.lower.size() == 0 || ghosts.upper.size() == 0)
    throw MissingClosure("div_micro: boundary rows j=0 and j=N_y need ghost edge values");
  require_shape(g, ghosts.lower, "div_micro lower ghost");
  require_shape(g, ghosts.upper, "div_micro upper ghost");
  MicroField out(g);
  const std::size_t ny = static_cast<std::size_t>(g.ny());
  const double inv = 1.0 / g.hy();
  for (std::size_t i = 0; i < out.rows(); ++i) {
    out(i, 0) = (v(i, 0) - ghosts.lower[i]) * inv;
    for (std::size_t j = 1; j < ny; ++j) out(i, j) = (v(i, j) - v(i, j - 1)) * inv;
    out(i, ny) = (ghosts.upper[i] - v(i, ny - 1)) * inv;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Laplacians

/// 3-point Laplacian on G_h^o with the mirror ghost u_{N_x+1} = u_{N_x-1}.
/// Entry 0 (the Dirichlet node) is returned as 0.
inline MacroField laplace_macro(const GridSpec& g, const MacroField& u) {
  require_shape(g, u, "laplace_macro");
  MacroField out(g);
  const std::size_t n = static_cast<std::size_t>(g.nx());
  const double inv = 1.0 / (g.hx() * g.hx());
  for (std::size_t i = 1; i < n; ++i) out[i] = (u[i - 1] - 2.0 * u[i] + u[i + 1]) * inv;
  out[n] = (2.0 * u[n - 1] - 2.0 * u[n]) * inv;
  return out;
}

/// Row-wise kernel of the micro Laplacian; `lower`/`upper` are the ghost values
/// u_{-1} and u_{N_y+1}. Shared by laplace_micro and the model right-hand side.
inline void laplace_micro_row(std::span<const double> u, double lower, double upper, double inv_h2,
                              std::span<double> out) {
  const std::size_t ny = u.size() - 1;
  out[0] = (lower - 2.0 * u[0] + u[1]) * inv_h2;
  for (std::size_t j = 1; j < ny; ++j) out[j] = (u[j - 1] - 2.0 * u[j] + u[j + 1]) * inv_h2;
  out[ny] = (u[ny - 1] - 2.0 * u[ny] + upper) * inv_h2;
}

inline MicroField laplace_micro(const GridSpec& g, const MicroField& u, const GhostClosure& closure) {
  require_shape(g, u, "laplace_micro");
  if (closure.delta1.size() == 0 || closure.delta2.size() == 0)
    throw MissingClosure("laplace_micro: a GhostClosure with delta1/delta2 is required");
  require_shape(g, closure.delta1, "laplace_micro delta1");
  require_shape(g, closure.delta2, "laplace_micro delta2");
  MicroField out(g);
  const std::size_t ny = static_cast<std::size_t>(g.ny());
  const double hy = g.hy();
  const double inv = 1.0 / (hy * hy);
  for (std::size_t i = 0; i < u.rows(); ++i) {
    const double lower = u(i, 1) + 2.0 * hy * closure.delta1[i];
    const double upper = u(i, ny - 1) + 2.0 * hy * closure.delta2[i];
    laplace_micro_row(u.row(i), lower, upper, inv, out.row(i));
  }
  return out;
}

/// Edge ghosts of grad_micro(u) implied by a closure: v_{-1/2} = (u_0 - u_{-1})/h_y
/// and v_{N_y+1/2} = (u_{N_y+1} - u_{N_y})/h_y.
inline MicroEdgeGhosts gradient_ghosts(const GridSpec& g, const MicroField& u, const GhostClosure& closure) {
  require_shape(g, u, "gradient_ghosts");
  const std::size_t ny = static_cast<std::size_t>(g.ny());
  const double hy = g.hy();
  MicroEdgeGhosts out{MacroField(g), MacroField(g)};
  for (std::size_t i = 0; i < u.rows(); ++i) {
    const double lower = u(i, 1) + 2.0 * hy * closure.delta1[i];
    const double upper = u(i, ny - 1) + 2.0 * hy * closure.delta2[i];
    out.lower[i] = (u(i, 0) - lower) / hy;
    out.upper[i] = (upper - u(i, ny)) / hy;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Summation-by-parts residuals

/// |(u, Div_h v)_{G_h^o} + (grad_h u, v)_{E_h}|, which vanishes when u_0 = 0 and
/// the ghost edge satisfies v_{N_x+1/2} = -v_{N_x-1/2}.
inline double green_macro_residual(const GridSpec& g, const MacroField& u, const MacroEdgeField& v,
                                   double upper_ghost) {
  require_shape(g, u, "green_macro_residual");
  require_shape(g, v, "green_macro_residual");
  if (u[0] != 0.0) throw PreconditionError("green_macro_residual: u_0 must be 0");
  const double last = v[v.size() - 1];
  if (std::abs(upper_ghost + last) > 1e-14 * (1.0 + std::abs(last)))
    throw PreconditionError("green_macro_residual: ghost edge must equal -v_{N_x-1/2}");
  const double lhs = ip_macro(g, u, div_macro(g, v, upper_ghost), Restriction::interior);
  const double rhs = ip_macro_edge(g, grad_macro(g, u), v);
  return std::abs(lhs + rhs);
}

/// |(u, Div_yh v)_{F_h} + (grad_yh u, v)_{H_h} - (u|_{y=0}, d1)_{G_h} - (u|_{y=ell}, d2)_{G_h}|
/// without any check of the ghost edges against the flux data.
inline double green_micro_defect(const GridSpec& g, const MicroField& u, const MicroEdgeField& v,
                                 const MicroEdgeGhosts& ghosts, const MacroField& delta1, const MacroField& delta2) {
  const double a = ip_micro(g, u, div_micro(g, v, ghosts));
  const double b = ip_micro_edge(g, grad_micro(g, u), v);
  const double c = ip_macro(g, trace(u, TraceSide::y0), delta1);
  const double d = ip_macro(g, trace(u, TraceSide::yell), delta2);
  return std::abs(a + b - c - d);
}

/// Same quantity as green_micro_defect. The ghost edges must encode the fluxes: -(v_{-1/2} + v_{1/2})/2 = d1 and
/// (v_{N_y-1/2} + v_{N_y+1/2})/2 = d2.
inline double green_micro_residual(const GridSpec& g, const MicroField& u, const MicroEdgeField& v,
                                   const MicroEdgeGhosts& ghosts, const MacroField& delta1,
                                   const MacroField& delta2) {
  require_shape(g, u, "green_micro_residual");
  require_shape(g, v, "green_micro_residual");
  require_shape(g, delta1, "green_micro_residual delta1");
  require_shape(g, delta2, "green_micro_residual delta2");
  const std::size_t ny = static_cast<std::size_t>(g.ny());
  for (std::size_t i = 0; i < u.rows(); ++i) {
    const double f1 = -0.5 * (ghosts.lower[i] + v(i, 0));
    const double f2 = 0.5 * (v(i, ny - 1) + ghosts.upper[i]);
    const double s1 = 1.0 + std::abs(ghosts.lower[i]) + std::abs(v(i, 0));
    const double s2 = 1.0 + std::abs(ghosts.upper[i]) + std::abs(v(i, ny - 1));
    if (std::abs(f1 - delta1[i]) > 1e-12 * s1 || std::abs(f2 - delta2[i]) > 1e-12 * s2)
      throw PreconditionError("green_micro_residual: ghost edges do not match the flux data at row " +
                              std::to_string(i));
  }
  return green_micro_defect(g, u, v, ghosts, delta1, delta2);
}

// ---------------------------------------------------------------------------
// Trace inequality

struct TraceBound {
  double lhs;  ///< ||u|_{y=ell}||^2_{G_h}
  double rhs;  ///< 2 ell (||grad_yh u||^2_{H_h} + ||u||^2_{F_h})
  bool holds() const { return lhs <= rhs; }
};

inline TraceBound trace_inequality_check(const GridSpec& g, const MicroField& u) {
  const MacroField top = trace(u, TraceSide::yell);
  const MicroEdgeField gu = grad_micro(g, u);
  return {ip_macro(g, top, top), 2.0 * g.ell() * (ip_micro_edge(g, gu, gu) + ip_micro(g, u, u))};
}

}  // namespace twoscale
