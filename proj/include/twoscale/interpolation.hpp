/**
 * @file interpolation.hpp
 * @brief Piecewise constant (dual grid) and piecewise linear (simplicial grid)
 *        extensions of grid functions, and exact L2 products of extensions.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "twoscale/operators.hpp"

namespace twoscale {

class OutsideDomain : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

struct Interval {
  double a;
  double b;
  double measure() const { return b - a; }
  double mid() const { return 0.5 * (a + b); }
};

struct Point {
  double x;
  double y;
};

/// Dual cells K_i = [x_i - h_x/2, x_i + h_x/2] clipped to [0, L], and their
/// tensor products with the micro dual cells.
struct DualCells {
  std::vector<Interval> macro;
  std::vector<Interval> micro_y;

  static DualCells of(const GridSpec& g) {
    DualCells d;
    for (int i = 0; i <= g.nx(); ++i)
      d.macro.push_back({std::max(0.0, g.x(i) - 0.5 * g.hx()), std::min(g.L(), g.x(i) + 0.5 * g.hx())});
    for (int j = 0; j <= g.ny(); ++j)
      d.micro_y.push_back({std::max(0.0, g.y(j) - 0.5 * g.hy()), std::min(g.ell(), g.y(j) + 0.5 * g.hy())});
    return d;
  }
};

/// Macro intervals [x_i, x_{i+1}] and the lower-left / upper-right triangles
/// of every micro grid rectangle.
struct SimplicialCells {
  std::vector<Interval> macro;
  std::vector<std::array<Point, 3>> lower_left;   ///< (x_i,y_j), (x_{i+1},y_j), (x_i,y_{j+1})
  std::vector<std::array<Point, 3>> upper_right;  ///< (x_{i+1},y_{j+1}), (x_{i+1},y_j), (x_i,y_{j+1})

  static SimplicialCells of(const GridSpec& g) {
    SimplicialCells s;
    for (int i = 0; i < g.nx(); ++i) s.macro.push_back({g.x(i), g.x(i + 1)});
    for (int i = 0; i < g.nx(); ++i)
      for (int j = 0; j < g.ny(); ++j) {
        const Point p00{g.x(i), g.y(j)}, p10{g.x(i + 1), g.y(j)}, p01{g.x(i), g.y(j + 1)},
            p11{g.x(i + 1), g.y(j + 1)};
        s.lower_left.push_back({p00, p10, p01});
        s.upper_right.push_back({p11, p10, p01});
      }
    return s;
  }
};

namespace detail {

inline void check_point(const GridSpec& g, double x) {
  if (!(x >= 0.0 && x <= g.L())) throw OutsideDomain("x outside [0, L]");
}
inline void check_point(const GridSpec& g, double x, double y) {
  check_point(g, x);
  if (!(y >= 0.0 && y <= g.ell())) throw OutsideDomain("y outside [0, ell]");
}

/// Index of the dual cell owning s; ties at cell boundaries go to the lower index.
inline std::size_t dual_index(double s, double h, int n) {
  const double t = std::ceil(s / h - 0.5);
  return static_cast<std::size_t>(std::clamp(t, 0.0, static_cast<double>(n)));
}

/// Index of the simplicial interval containing s.
inline std::size_t cell_index(double s, double h, int n) {
  const double t = std::floor(s / h);
  return static_cast<std::size_t>(std::clamp(t, 0.0, static_cast<double>(n - 1)));
}

}  // namespace detail

inline double pwc_eval(const GridSpec& g, const MacroField& u, double x) {
  require_shape(g, u, "pwc_eval");
  detail::check_point(g, x);
  return u[detail::dual_index(x, g.hx(), g.nx())];
}

inline double pwc_eval(const GridSpec& g, const MicroField& u, double x, double y) {
  require_shape(g, u, "pwc_eval");
  detail::check_point(g, x, y);
  return u(detail::dual_index(x, g.hx(), g.nx()), detail::dual_index(y, g.hy(), g.ny()));
}

/// u_i + (grad_h u)_{i+1/2} (x - x_i) on [x_i, x_{i+1}].
inline double pwl_eval(const GridSpec& g, const MacroField& u, double x) {
  require_shape(g, u, "pwl_eval");
  detail::check_point(g, x);
  const std::size_t i = detail::cell_index(x, g.hx(), g.nx());
  const double xi = g.x(static_cast<int>(i));
  return u[i] + (u[i + 1] - u[i]) / g.hx() * (x - xi);
}

/// Affine interpolant on the triangle containing (x, y). On the lower-left
/// triangle this is u_ij + d+_x u_ij (x - x_i) + (grad_yh u)_{i,j+1/2} (y - y_j);
/// on the upper-right one it is anchored at (x_{i+1}, y_{j+1}).
inline double pwl_eval(const GridSpec& g, const MicroField& u, double x, double y) {
  require_shape(g, u, "pwl_eval");
  detail::check_point(g, x, y);
  const std::size_t i = detail::cell_index(x, g.hx(), g.nx());
  const std::size_t j = detail::cell_index(y, g.hy(), g.ny());
  const double hx = g.hx(), hy = g.hy();
  const double xi = g.x(static_cast<int>(i)), yj = g.y(static_cast<int>(j));
  const double xi1 = g.x(static_cast<int>(i) + 1), yj1 = g.y(static_cast<int>(j) + 1);
  if ((x - xi) / hx + (y - yj) / hy <= 1.0) {
    const double dx = (u(i + 1, j) - u(i, j)) / hx;
    const double dy = (u(i, j + 1) - u(i, j)) / hy;
    return u(i, j) + dx * (x - xi) + dy * (y - yj);
  }
  const double dx = (u(i + 1, j + 1) - u(i, j + 1)) / hx;
  const double dy = (u(i + 1, j + 1) - u(i + 1, j)) / hy;
  return u(i + 1, j + 1) - dx * (xi1 - x) - dy * (yj1 - y);
}

// ---------------------------------------------------------------------------
// Exact L2 products of extensions

/// (u_bar, v_bar)_{L2(Omega)} integrated cell by cell over the dual grid.
inline double l2_pwc_macro(const GridSpec& g, const MacroField& u, const MacroField& v) {
  double s = 0.0;
  for (const Interval& c : DualCells::of(g).macro) s += c.measure() * pwc_eval(g, u, c.mid()) * pwc_eval(g, v, c.mid());
  return s;
}

inline double l2_pwc_micro(const GridSpec& g, const MicroField& u, const MicroField& v) {
  const DualCells d = DualCells::of(g);
  double s = 0.0;
  for (const Interval& cx : d.macro)
    for (const Interval& cy : d.micro_y)
      s += cx.measure() * cy.measure() * pwc_eval(g, u, cx.mid(), cy.mid()) * pwc_eval(g, v, cx.mid(), cy.mid());
  return s;
}

/// (d/dx u_hat, d/dx v_hat)_{L2(Omega)}; the slope on each interval is read
/// off the extension at two interior points.
inline double l2_grad_pwl_macro(const GridSpec& g, const MacroField& u, const MacroField& v) {
  double s = 0.0;
  for (const Interval& c : SimplicialCells::of(g).macro) {
    const double a = c.a + 0.25 * c.measure(), b = c.a + 0.75 * c.measure();
    const double su = (pwl_eval(g, u, b) - pwl_eval(g, u, a)) / (b - a);
    const double sv = (pwl_eval(g, v, b) - pwl_eval(g, v, a)) / (b - a);
    s += c.measure() * su * sv;
  }
  return s;
}

namespace detail {

inline double triangle_area(const std::array<Point, 3>& t) {
  return 0.5 * std::abs((t[1].x - t[0].x) * (t[2].y - t[0].y) - (t[2].x - t[0].x) * (t[1].y - t[0].y));
}

/// y-derivative of an affine function known at three interior points of a
/// triangle (barycentric weights w of its vertices).
template <class Eval>
double affine_dy(const std::array<Point, 3>& t, Eval&& f) {
  constexpr std::array<std::array<double, 3>, 3> w{{{1.0 / 3, 1.0 / 3, 1.0 / 3},
                                                    {1.0 / 2, 1.0 / 4, 1.0 / 4},
                                                    {1.0 / 4, 1.0 / 4, 1.0 / 2}}};
  std::array<Point, 3> q{};
  std::array<double, 3> val{};
  for (std::size_t k = 0; k < 3; ++k) {
    q[k] = {w[k][0] * t[0].x + w[k][1] * t[1].x + w[k][2] * t[2].x,
            w[k][0] * t[0].y + w[k][1] * t[1].y + w[k][2] * t[2].y};
    val[k] = f(q[k]);
  }
  // Solve [dx1 dy1; dx2 dy2] [gx; gy] = [dv1; dv2].
  const double ax = q[1].x - q[0].x, ay = q[1].y - q[0].y, bx = q[2].x - q[0].x, by = q[2].y - q[0].y;
  const double dv1 = val[1] - val[0], dv2 = val[2] - val[0];
  const double det = ax * by - ay * bx;
  return (ax * dv2 - bx * dv1) / det;
}

}  // namespace detail

/// (d/dy u_hat, d/dy v_hat)_{L2(Omega x Y)} summed over all triangles.
inline double l2_grad_pwl_micro(const GridSpec& g, const MicroField& u, const MicroField& v) {
  const SimplicialCells cells = SimplicialCells::of(g);
  double s = 0.0;
  auto add = [&](const std::array<Point, 3>& t) {
    const double gu = detail::affine_dy(t, [&](Point p) { return pwl_eval(g, u, p.x, p.y); });
    const double gv = detail::affine_dy(t, [&](Point p) { return pwl_eval(g, v, p.x, p.y); });
    s += detail::triangle_area(t) * gu * gv;
  };
  for (const auto& t : cells.lower_left) add(t);
  for (const auto& t : cells.upper_right) add(t);
  return s;
}

struct ExtensionResiduals {
  double pwc_macro = 0.0;   ///< |(u_bar, v_bar) - (u, v)_{G_h}|
  double grad_macro = 0.0;  ///< |(u_hat', v_hat') - (grad u, grad v)_{E_h}|
  double pwc_micro = 0.0;   ///< |(U_bar, V_bar) - (U, V)_{F_h}|
  double grad_micro = 0.0;  ///< |(d_y U_hat, d_y V_hat) - (grad_y U, grad_y V)_{H_h}|
};

/// Residuals of the four scalar-product equalities between extensions and grid
/// functions. Also returns the discrete products in `reference` for scaling.
inline ExtensionResiduals extension_residuals(const GridSpec& g, const MacroField& u, const MacroField& v,
                                              const MicroField& U, const MicroField& V,
                                              ExtensionResiduals* reference = nullptr) {
  const double a = ip_macro(g, u, v);
  const double b = ip_macro_edge(g, grad_macro(g, u), grad_macro(g, v));
  const double c = ip_micro(g, U, V);
  const double d = ip_micro_edge(g, grad_micro(g, U), grad_micro(g, V));
  if (reference) *reference = {a, b, c, d};
  return {std::abs(l2_pwc_macro(g, u, v) - a), std::abs(l2_grad_pwl_macro(g, u, v) - b),
          std::abs(l2_pwc_micro(g, U, V) - c), std::abs(l2_grad_pwl_micro(g, U, V) - d)};
}

}  // namespace twoscale
