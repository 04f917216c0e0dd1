#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "twoscale/grid.hpp"

using namespace twoscale;

TEST(GridSpec, NodesAndSpacing) {
  const GridSpec g = make_grid(2.0, 0.5, 4, 5);
  EXPECT_DOUBLE_EQ(g.hx(), 0.5);
  EXPECT_DOUBLE_EQ(g.hy(), 0.1);
  EXPECT_DOUBLE_EQ(g.x(4), 2.0);
  EXPECT_DOUBLE_EQ(g.y(5), 0.5);
  EXPECT_DOUBLE_EQ(g.x_half(0), 0.25);
  EXPECT_DOUBLE_EQ(g.y_half(4), 0.45);
}

TEST(GridSpec, BoundaryWeightsAreHalf) {
  const GridSpec g = make_grid(1.0, 1.0, 3, 2);
  EXPECT_EQ(g.gamma1(0), 0.5);
  EXPECT_EQ(g.gamma1(1), 1.0);
  EXPECT_EQ(g.gamma1(3), 0.5);
  EXPECT_EQ(g.gamma2(0), 0.5);
  EXPECT_EQ(g.gamma2(1), 1.0);
  EXPECT_EQ(g.gamma2(2), 0.5);
}

TEST(GridSpec, RejectsDegenerateInput) {
  EXPECT_THROW(make_grid(0.0, 1.0, 4, 4), InvalidGrid);
  EXPECT_THROW(make_grid(1.0, -1.0, 4, 4), InvalidGrid);
  EXPECT_THROW(make_grid(1.0, 1.0, 1, 4), InvalidGrid);
  EXPECT_THROW(make_grid(1.0, 1.0, 4, 0), InvalidGrid);
  EXPECT_THROW(make_grid(std::nan(""), 1.0, 4, 4), InvalidGrid);
}

TEST(GridFunction, ShapesFollowLayout) {
  const GridSpec g = make_grid(1.0, 1.0, 4, 3);
  EXPECT_EQ(MacroField(g).size(), 5u);
  EXPECT_EQ(MacroEdgeField(g).size(), 4u);
  EXPECT_EQ(MicroField(g).rows(), 5u);
  EXPECT_EQ(MicroField(g).cols(), 4u);
  EXPECT_EQ(MicroEdgeField(g).cols(), 3u);
  EXPECT_THROW(MicroField(2, 2, {1.0, 2.0, 3.0}), ShapeMismatch);
}

TEST(InnerProducts, ConstantFieldsGiveDomainMeasure) {
  const GridSpec g = make_grid(2.0, 3.0, 6, 5);
  EXPECT_NEAR(ip_macro(g, MacroField(g, 1.0), MacroField(g, 1.0)), 2.0, 1e-14);
  EXPECT_NEAR(ip_micro(g, MicroField(g, 1.0), MicroField(g, 1.0)), 6.0, 1e-14);
  EXPECT_NEAR(ip_macro_edge(g, MacroEdgeField(g, 1.0), MacroEdgeField(g, 1.0)), 2.0, 1e-14);
  EXPECT_NEAR(ip_micro_edge(g, MicroEdgeField(g, 1.0), MicroEdgeField(g, 1.0)), 6.0, 1e-14);
}

TEST(InnerProducts, InteriorRestrictionDropsFirstNode) {
  const GridSpec g = make_grid(1.0, 1.0, 4, 4);
  MacroField u(g, 1.0);
  // h (0.5 + 1 + 1 + 1 + 0.5) minus the i = 0 term h * 0.5.
  EXPECT_NEAR(ip_macro(g, u, u, Restriction::interior), 0.875, 1e-15);
}

TEST(InnerProducts, QuadraticMatchesTrapezoidErrorFormula) {
  // Trapezoid rule on x^2 over [0, L]: L^3/3 + L h^2 / 6.
  for (int n : {4, 8, 16, 33}) {
    const GridSpec g = make_grid(1.5, 1.0, n, 2);
    const MacroField u = sample_macro(g, [](double x) { return x; });
    const double h = g.hx();
    EXPECT_NEAR(ip_macro(g, u, u), 1.5 * 1.5 * 1.5 / 3.0 + 1.5 * h * h / 6.0, 1e-13) << "n=" << n;
  }
}

TEST(InnerProducts, MicroWeightsAreTensorProduct) {
  const GridSpec g = make_grid(1.0, 2.0, 3, 4);
  const MicroField u = sample_micro(g, [](double x, double y) { return x + y; });
  const MicroField v = sample_micro(g, [](double x, double y) { return x * y - 1.0; });
  double ref = 0.0;
  for (int i = 0; i <= 3; ++i)
    for (int j = 0; j <= 4; ++j) {
      const double wi = (i == 0 || i == 3) ? 0.5 : 1.0;
      const double wj = (j == 0 || j == 4) ? 0.5 : 1.0;
      ref += wi * wj * (g.x(i) + g.y(j)) * (g.x(i) * g.y(j) - 1.0);
    }
  EXPECT_NEAR(ip_micro(g, u, v), g.hx() * g.hy() * ref, 1e-13);
}

TEST(InnerProducts, MicroEdgeCarriesOnlyMacroWeight) {
  const GridSpec g = make_grid(1.0, 1.0, 2, 2);
  MicroEdgeField v(g, 1.0);
  v(1, 0) = 3.0;
  // h_x h_y [0.5 (1 + 1) + 1 (9 + 1) + 0.5 (1 + 1)] = 0.25 * 12
  EXPECT_NEAR(ip_micro_edge(g, v, v), 3.0, 1e-15);
}

TEST(InnerProducts, PairwiseAgreesWithNaive) {
  const GridSpec g = make_grid(1.0, 1.0, 64, 64);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  MicroField u(g), v(g);
  for (double& a : u.raw()) a = d(rng);
  for (double& a : v.raw()) a = d(rng);
  const double naive = ip_micro(g, u, v, Summation::naive);
  const double pairwise = ip_micro(g, u, v, Summation::pairwise);
  EXPECT_NEAR(naive, pairwise, 1e-13 * (1.0 + std::abs(naive)));
}

TEST(InnerProducts, ShapeMismatchThrows) {
  const GridSpec g = make_grid(1.0, 1.0, 4, 4);
  const GridSpec h = make_grid(1.0, 1.0, 5, 4);
  EXPECT_THROW(ip_macro(g, MacroField(g), MacroField(h)), ShapeMismatch);
  EXPECT_THROW(ip_micro(g, MicroField(h), MicroField(g)), ShapeMismatch);
}

TEST(Trace, PicksBoundaryRows) {
  const GridSpec g = make_grid(1.0, 1.0, 2, 3);
  const MicroField u = sample_micro(g, [](double x, double y) { return 10.0 * x + y; });
  const MacroField bottom = trace(u, TraceSide::y0);
  const MacroField top = trace(u, TraceSide::yell);
  EXPECT_DOUBLE_EQ(bottom[2], 10.0);
  EXPECT_DOUBLE_EQ(top[1], 6.0);
}

TEST(Format, SeventeenSignificantDigitsRoundTrip) {
  const double v = 0.1 + 0.2;
  EXPECT_EQ(std::stod(detail::fmt17(v)), v);
  EXPECT_EQ(detail::fmt17(0.5), "0.5");
}
