/**
 * @file model.hpp
 * @brief Semi-discrete two-scale corrosion system: state, boundary closures
 *        and the method-of-lines right-hand side.
 *
 * The solved macro unknown is the shifted gas concentration
 * u1~ = u1 - u1_D, which carries a homogeneous Dirichlet condition at x = 0.
 * Unknowns:
 *   u1 (macro, shifted)  gas H2S,
 *   u2 (micro)           dissolved H2S,
 *   u3 (micro)           sulfuric acid,
 *   u4 (macro)           gypsum.
 */
#pragma once

#include <functional>
#include <string>

#include "twoscale/grid.hpp"
#include "twoscale/operators.hpp"
#include "twoscale/params.hpp"

namespace twoscale {

struct State {
  double t = 0.0;
  MacroField u1;  ///< shifted gas concentration, u1[0] == 0
  MicroField u2;
  MicroField u3;
  MacroField u4;

  State() = default;
  explicit State(const GridSpec& g) : u1(g), u2(g), u3(g), u4(g) {}

  /// Unshifted gas concentration u1~ + u1_D.
  MacroField u1_unshifted(const ModelParams& p) const {
    MacroField out = u1;
    for (double& v : out.values()) v += p.u1_d;
    return out;
  }

  bool matches(const GridSpec& g) const { return u1.matches(g) && u2.matches(g) && u3.matches(g) && u4.matches(g); }
  bool all_finite() const { return u1.all_finite() && u2.all_finite() && u3.all_finite() && u4.all_finite(); }

  /// Applies f to the four underlying value arrays in a fixed order.
  template <class F>
  void for_each_component(F&& f) {
    f(u1.raw());
    f(u2.raw());
    f(u3.raw());
    f(u4.raw());
  }
  template <class F>
  void for_each_component(F&& f) const {
    f(u1.raw());
    f(u2.raw());
    f(u3.raw());
    f(u4.raw());
  }
};

/// Optional volume sources added to the right-hand side (used by manufactured
/// solutions). Any member may be empty.
struct SourceTerms {
  std::function<double(double x, double t)> f1;
  std::function<double(double x, double y, double t)> f2;
  std::function<double(double x, double y, double t)> f3;
  std::function<double(double x, double t)> f4;
};

/// Out-of-grid values of all four unknowns.
struct GhostRows {
  double u1_left = 0.0;   ///< u1_0, pinned
  double u1_right = 0.0;  ///< u1_{N_x+1} = u1_{N_x-1}
  MacroField u2_lower;    ///< u2_{i,-1}
  MacroField u2_upper;    ///< u2_{i,N_y+1}
  MacroField u3_lower;
  MacroField u3_upper;
};

/// Flux data of the u2 and u3 cell problems:
///   u2: delta1 = Bi_M (H (u1 + u1_D) - u2|_{y=0}) / d2, delta2 = 0
///   u3: delta1 = 0, delta2 = -eta(u3|_{y=ell}, u4) / d3
/// With a zero diffusivity the flux is irrelevant and reported as 0.
struct MicroClosures {
  GhostClosure u2;
  GhostClosure u3;
};

inline MicroClosures micro_closures(const State& s, const ModelParams& p, const GridSpec& g) {
  MicroClosures c{GhostClosure::neumann(g), GhostClosure::neumann(g)};
  const std::size_t ny = static_cast<std::size_t>(g.ny());
  for (std::size_t i = 0; i < s.u1.size(); ++i) {
    if (p.d2 > 0.0) c.u2.delta1[i] = p.bi_m * (p.henry * (s.u1[i] + p.u1_d) - s.u2(i, 0)) / p.d2;
    if (p.d3 > 0.0) c.u3.delta2[i] = -eta(s.u3(i, ny), s.u4[i], p) / p.d3;
  }
  return c;
}

inline GhostRows ghost_values(const State& s, const ModelParams& p, const GridSpec& g) {
  const std::size_t nx = static_cast<std::size_t>(g.nx());
  const std::size_t ny = static_cast<std::size_t>(g.ny());
  const double hy = g.hy();
  const MicroClosures c = micro_closures(s, p, g);
  GhostRows r{0.0, s.u1[nx - 1], MacroField(g), MacroField(g), MacroField(g), MacroField(g)};
  for (std::size_t i = 0; i <= nx; ++i) {
    r.u2_lower[i] = s.u2(i, 1) + 2.0 * hy * c.u2.delta1[i];
    r.u2_upper[i] = s.u2(i, ny - 1) + 2.0 * hy * c.u2.delta2[i];
    r.u3_lower[i] = s.u3(i, 1) + 2.0 * hy * c.u3.delta1[i];
    r.u3_upper[i] = s.u3(i, ny - 1) + 2.0 * hy * c.u3.delta2[i];
  }
  return r;
}

/// Writes the tendency of `s` into `out` (which must already be shaped for g).
/// The u1 tendency at the Dirichlet node is 0.
inline void rhs_into(const State& s, const ModelParams& p, const GridSpec& g, const SourceTerms* src, State& out) {
  const std::size_t nx = static_cast<std::size_t>(g.nx());
  const std::size_t ny = static_cast<std::size_t>(g.ny());
  const double hx = g.hx(), hy = g.hy();
  const double inv_hx2 = 1.0 / (hx * hx);
  const double inv_hy2 = 1.0 / (hy * hy);
  out.t = s.t;

  // Macro gas equation on Omega_h^o.
  out.u1[0] = 0.0;
  for (std::size_t i = 1; i <= nx; ++i) {
    const double right = i < nx ? s.u1[i + 1] : s.u1[nx - 1];
    const double lap = (s.u1[i - 1] - 2.0 * s.u1[i] + right) * inv_hx2;
    const double exchange = p.bi_m * (p.henry * (s.u1[i] + p.u1_d) - s.u2(i, 0));
    out.u1[i] = p.d1 * lap - exchange;
    if (src && src->f1) out.u1[i] += src->f1(g.x(static_cast<int>(i)), s.t);
  }

  // Cell problems, one per macro node.
  for (std::size_t i = 0; i <= nx; ++i) {
    const auto u2 = s.u2.row(i);
    const auto u3 = s.u3.row(i);
    auto du2 = out.u2.row(i);
    auto du3 = out.u3.row(i);
    // (u_{-1} - u_1) = 2 h_y delta1 and (u_{N_y+1} - u_{N_y-1}) = 2 h_y delta2, multiplied by d.
    const double flux2_lower = p.bi_m * (p.henry * (s.u1[i] + p.u1_d) - u2[0]);
    const double flux3_upper = -eta(u3[ny], s.u4[i], p);
    // d * Laplacian, boundary rows carry the flux term explicitly so that a
    // zero diffusivity switches the exchange off as well.
    du2[0] = p.d2 * 2.0 * (u2[1] - u2[0]) * inv_hy2 + 2.0 * flux2_lower / hy;
    du3[0] = p.d3 * 2.0 * (u3[1] - u3[0]) * inv_hy2;
    for (std::size_t j = 1; j < ny; ++j) {
      du2[j] = p.d2 * (u2[j - 1] - 2.0 * u2[j] + u2[j + 1]) * inv_hy2;
      du3[j] = p.d3 * (u3[j - 1] - 2.0 * u3[j] + u3[j + 1]) * inv_hy2;
    }
    du2[ny] = p.d2 * 2.0 * (u2[ny - 1] - u2[ny]) * inv_hy2;
    du3[ny] = p.d3 * 2.0 * (u3[ny - 1] - u3[ny]) * inv_hy2 + 2.0 * flux3_upper / hy;
    if (p.d2 == 0.0) du2[0] = 0.0;
    if (p.d3 == 0.0) du3[ny] = 0.0;

    for (std::size_t j = 0; j <= ny; ++j) {
      const double z = zeta(u2[j], u3[j], p.alpha.at(j), p.beta.at(j));
      du2[j] -= z;
      du3[j] += z;
    }
    if (src && (src->f2 || src->f3)) {
      const double x = g.x(static_cast<int>(i));
      for (std::size_t j = 0; j <= ny; ++j) {
        const double y = g.y(static_cast<int>(j));
        if (src->f2) du2[j] += src->f2(x, y, s.t);
        if (src->f3) du3[j] += src->f3(x, y, s.t);
      }
    }

    out.u4[i] = eta(u3[ny], s.u4[i], p);
    if (src && src->f4) out.u4[i] += src->f4(g.x(static_cast<int>(i)), s.t);
  }
}

/// Tendency of the semi-discrete system at `s`.
inline State rhs(const State& s, const ModelParams& p, const GridSpec& g, const SourceTerms* src = nullptr) {
  if (!s.matches(g)) throw ShapeMismatch("rhs: state does not match the grid");
  validate(p, &g, Validation::degenerate);
  State out(g);
  rhs_into(s, p, g, src, out);
  return out;
}

class InitialDataError : public ParameterError {
 public:
  explicit InitialDataError(const std::string& what) : ParameterError("A4", what) {}
};

enum class Positivity { strict, lenient };

/// Pointwise sampling of the initial data. The shifted u1 is pinned to 0 at
/// the Dirichlet node.
inline State project_initial(const GridSpec& g, const ModelParams& p, const std::function<double(double)>& u1_0,
                             const std::function<double(double, double)>& u2_0,
                             const std::function<double(double, double)>& u3_0,
                             const std::function<double(double)>& u4_0, Positivity mode = Positivity::strict) {
  State s(g);
  s.u1 = sample_macro(g, [&](double x) { return u1_0(x) - p.u1_d; });
  s.u2 = sample_micro(g, u2_0);
  s.u3 = sample_micro(g, u3_0);
  s.u4 = sample_macro(g, u4_0);
  if (!s.all_finite()) throw InitialDataError("initial data must be finite");
  s.u1[0] = 0.0;
  if (mode == Positivity::strict) {
    auto nonneg = [](std::span<const double> v, double shift) {
      return std::all_of(v.begin(), v.end(), [shift](double a) { return a + shift >= 0.0; });
    };
    if (!nonneg(s.u1.values(), p.u1_d)) throw InitialDataError("u1 initial data must be nonnegative");
    if (!nonneg(s.u2.values(), 0.0)) throw InitialDataError("u2 initial data must be nonnegative");
    if (!nonneg(s.u3.values(), 0.0)) throw InitialDataError("u3 initial data must be nonnegative");
    if (!nonneg(s.u4.values(), 0.0)) throw InitialDataError("u4 initial data must be nonnegative");
  }
  return s;
}

}  // namespace twoscale
