#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <random>

#include "twoscale/interpolation.hpp"

using namespace twoscale;

namespace {

template <class Field>
void fill_random(Field& f, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (double& v : f.raw()) v = d(rng);
}

/// Linear interpolation on a triangle through barycentric coordinates.
double barycentric(const std::array<Point, 3>& t, const std::array<double, 3>& val, Point p) {
  const double det = (t[1].y - t[2].y) * (t[0].x - t[2].x) + (t[2].x - t[1].x) * (t[0].y - t[2].y);
  const double l0 = ((t[1].y - t[2].y) * (p.x - t[2].x) + (t[2].x - t[1].x) * (p.y - t[2].y)) / det;
  const double l1 = ((t[2].y - t[0].y) * (p.x - t[2].x) + (t[0].x - t[2].x) * (p.y - t[2].y)) / det;
  return l0 * val[0] + l1 * val[1] + (1.0 - l0 - l1) * val[2];
}

}  // namespace

TEST(DualCells, TileTheDomain) {
  const GridSpec g = make_grid(2.0, 0.5, 5, 4);
  const DualCells d = DualCells::of(g);
  double total = 0.0;
  for (int i = 0; i <= 5; ++i) {
    EXPECT_NEAR(d.macro[static_cast<std::size_t>(i)].measure(), g.gamma1(i) * g.hx(), 1e-15);
    total += d.macro[static_cast<std::size_t>(i)].measure();
  }
  EXPECT_NEAR(total, 2.0, 1e-14);
  double area = 0.0;
  for (const Interval& cx : d.macro)
    for (const Interval& cy : d.micro_y) area += cx.measure() * cy.measure();
  EXPECT_NEAR(area, 1.0, 1e-14);
}

TEST(SimplicialCells, TrianglesTileRectangles) {
  const GridSpec g = make_grid(1.0, 2.0, 3, 4);
  const SimplicialCells s = SimplicialCells::of(g);
  ASSERT_EQ(s.lower_left.size(), 12u);
  double area = 0.0;
  for (const auto& t : s.lower_left) area += detail::triangle_area(t);
  for (const auto& t : s.upper_right) area += detail::triangle_area(t);
  EXPECT_NEAR(area, 2.0, 1e-14);
}

TEST(PwcEval, NodesTiesAndConstants) {
  const GridSpec g = make_grid(1.0, 1.0, 4, 4);
  const MacroField u(std::vector<double>{1.0, 2.0, 3.0, 4.0, 5.0});
  for (int i = 0; i <= 4; ++i) EXPECT_EQ(pwc_eval(g, u, g.x(i)), u[static_cast<std::size_t>(i)]);
  EXPECT_EQ(pwc_eval(g, u, g.x(1) + 0.5 * g.hx()), 2.0);
  EXPECT_EQ(pwc_eval(g, u, g.x(1) + 0.5 * g.hx() + 1e-12), 3.0);
  const MicroField c(g, 7.0);
  EXPECT_EQ(pwc_eval(g, c, 0.3, 0.9), 7.0);
  EXPECT_THROW(pwc_eval(g, u, 1.5), OutsideDomain);
  EXPECT_THROW(pwc_eval(g, c, 0.5, -0.1), OutsideDomain);
}

TEST(PwlEval, MacroMidpointsAndAffineReproduction) {
  const GridSpec g = make_grid(2.0, 1.0, 4, 2);
  const MacroField u(std::vector<double>{0.0, 1.0, 4.0, 9.0, 16.0});
  EXPECT_DOUBLE_EQ(pwl_eval(g, u, 0.75), 2.5);
  EXPECT_DOUBLE_EQ(pwl_eval(g, u, 2.0), 16.0);
  const MacroField a = sample_macro(g, [](double x) { return 1.0 - 3.0 * x; });
  for (double x : {0.0, 0.13, 0.9, 1.77, 2.0}) EXPECT_NEAR(pwl_eval(g, a, x), 1.0 - 3.0 * x, 1e-14);
}

TEST(PwlEval, MicroReproducesAffineFields) {
  const GridSpec g = make_grid(1.5, 0.8, 5, 7);
  const MicroField u = sample_micro(g, [](double x, double y) { return 0.3 + 2.0 * x - 1.5 * y; });
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> ux(0.0, 1.5), uy(0.0, 0.8);
  for (int k = 0; k < 200; ++k) {
    const double x = ux(rng), y = uy(rng);
    EXPECT_NEAR(pwl_eval(g, u, x, y), 0.3 + 2.0 * x - 1.5 * y, 1e-13);
  }
}

TEST(PwlEval, MicroMatchesBarycentricOracle) {
  // u = x y on N = 2; oracle evaluates the same triangles by barycentric weights.
  const GridSpec g = make_grid(1.0, 1.0, 2, 2);
  const MicroField u = sample_micro(g, [](double x, double y) { return x * y; });
  const SimplicialCells cells = SimplicialCells::of(g);
  auto check = [&](const std::array<Point, 3>& t) {
    std::array<double, 3> val{};
    for (std::size_t k = 0; k < 3; ++k) val[k] = t[k].x * t[k].y;
    for (const std::array<double, 3>& w : {std::array<double, 3>{1.0 / 3, 1.0 / 3, 1.0 / 3},
                                           std::array<double, 3>{0.6, 0.3, 0.1}, std::array<double, 3>{0.1, 0.2, 0.7}}) {
      const Point p{w[0] * t[0].x + w[1] * t[1].x + w[2] * t[2].x, w[0] * t[0].y + w[1] * t[1].y + w[2] * t[2].y};
      EXPECT_NEAR(pwl_eval(g, u, p.x, p.y), barycentric(t, val, p), 1e-15);
    }
  };
  for (const auto& t : cells.lower_left) check(t);
  for (const auto& t : cells.upper_right) check(t);
  // Centroid of the lower-left triangle of cell (0, 0): only (h, h) is nonzero and not a vertex.
  EXPECT_NEAR(pwl_eval(g, u, 0.5 / 3.0, 0.5 / 3.0), 0.0, 1e-15);
  // Centroid of the upper-right triangle of cell (0, 0): (0.25 + 0 + 0) / 3.
  EXPECT_NEAR(pwl_eval(g, u, 1.0 / 3.0, 1.0 / 3.0), 0.25 / 3.0, 1e-15);
}

TEST(PwlEval, ContinuousAcrossEdges) {
  std::mt19937_64 rng(2);
  const GridSpec g = make_grid(1.0, 1.0, 6, 5);
  MicroField u(g);
  fill_random(u, rng);
  const double hx = g.hx(), hy = g.hy();
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 5; ++j)
      for (double s : {0.1, 0.5, 0.9}) {
        // Diagonal shared by both triangles of the cell.
        const double x = g.x(i) + s * hx, y = g.y(j) + (1.0 - s) * hy;
        const double lo = pwl_eval(g, u, x - 1e-13, y - 1e-13);
        const double hi = pwl_eval(g, u, x + 1e-13, y + 1e-13);
        EXPECT_NEAR(lo, hi, 1e-11);
        // Vertical edge shared with the next cell.
        if (i + 1 < 6) {
          const double xe = g.x(i + 1), ye = g.y(j) + s * hy;
          EXPECT_NEAR(pwl_eval(g, u, xe - 1e-13, ye), pwl_eval(g, u, xe + 1e-13, ye), 1e-11);
        }
      }
  for (int i = 0; i <= 6; ++i)
    for (int j = 0; j <= 5; ++j) EXPECT_NEAR(pwl_eval(g, u, g.x(i), g.y(j)), u(static_cast<std::size_t>(i), static_cast<std::size_t>(j)), 1e-14);
}

TEST(ExtensionResiduals, ConstantFields) {
  const GridSpec g = make_grid(2.0, 3.0, 4, 4);
  ExtensionResiduals ref;
  const ExtensionResiduals r =
      extension_residuals(g, MacroField(g, 1.0), MacroField(g, 1.0), MicroField(g, 1.0), MicroField(g, 1.0), &ref);
  EXPECT_NEAR(ref.pwc_macro, 2.0, 1e-14);
  EXPECT_EQ(ref.grad_macro, 0.0);
  EXPECT_NEAR(ref.pwc_micro, 6.0, 1e-14);
  EXPECT_EQ(ref.grad_micro, 0.0);
  EXPECT_NEAR(r.pwc_macro + r.grad_macro + r.pwc_micro + r.grad_micro, 0.0, 1e-13);
}

TEST(ExtensionResiduals, AffineFieldsGiveExactGradientProducts) {
  const GridSpec g = make_grid(1.0, 2.0, 5, 3);
  const MacroField u = sample_macro(g, [](double x) { return 2.0 * x; });
  const MicroField U = sample_micro(g, [](double x, double y) { return x - 4.0 * y; });
  ExtensionResiduals ref;
  const ExtensionResiduals r = extension_residuals(g, u, u, U, U, &ref);
  EXPECT_NEAR(ref.grad_macro, 4.0, 1e-13);
  EXPECT_NEAR(ref.grad_micro, 32.0, 1e-12);
  EXPECT_NEAR(r.grad_macro, 0.0, 1e-13);
  EXPECT_NEAR(r.grad_micro, 0.0, 1e-12);
}

TEST(ExtensionResiduals, RandomFieldsToMachinePrecision) {
  std::mt19937_64 rng(8);
  for (int n : {8, 32, 64}) {
    const GridSpec g = make_grid(1.7, 0.6, n, n);
    MacroField u(g), v(g);
    MicroField U(g), V(g);
    fill_random(u, rng);
    fill_random(v, rng);
    fill_random(U, rng);
    fill_random(V, rng);
    const ExtensionResiduals r = extension_residuals(g, u, v, U, V);
    const double s1 = norm_macro(g, u) * norm_macro(g, v);
    const double s2 = norm_macro_edge(g, grad_macro(g, u)) * norm_macro_edge(g, grad_macro(g, v));
    const double s3 = norm_micro(g, U) * norm_micro(g, V);
    const double s4 = norm_micro_edge(g, grad_micro(g, U)) * norm_micro_edge(g, grad_micro(g, V));
    EXPECT_LE(r.pwc_macro, 1e-12 * s1) << n;
    EXPECT_LE(r.grad_macro, 1e-12 * s2) << n;
    EXPECT_LE(r.pwc_micro, 1e-12 * s3) << n;
    EXPECT_LE(r.grad_micro, 1e-12 * s4) << n;
  }
}
