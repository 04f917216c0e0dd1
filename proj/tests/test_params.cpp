#include <gtest/gtest.h>

#include <string>

#include "twoscale/params.hpp"

using namespace twoscale;

namespace {

std::string violated(const ModelParams& p, const GridSpec* g = nullptr, Validation mode = Validation::strict) {
  try {
    validate(p, g, mode);
  } catch (const ParameterError& e) {
    return e.assumption();
  }
  return "";
}

}  // namespace

TEST(Zeta, Arithmetic) {
  EXPECT_DOUBLE_EQ(zeta(3.0, 1.0, 1.0, 2.0), 1.0);
  EXPECT_EQ(zeta(0.0, 0.0, 1.0, 2.0), 0.0);
  EXPECT_EQ(zeta(1.0, 1.0, 0.3, 0.3), 0.0);
}

TEST(Eta, CutoffAndKernels) {
  ModelParams p;
  p.k = 1.0;
  p.q_kernel = QKernel::linear_decay(1.0, 2.0);
  EXPECT_EQ(eta(-1.0, 5.0, p), 0.0);
  EXPECT_EQ(eta(1.0, -0.1, p), 0.0);
  EXPECT_EQ(eta(0.0, 0.5, p), 0.0);
  EXPECT_DOUBLE_EQ(eta(2.0, 0.0, p), 2.0);
  EXPECT_DOUBLE_EQ(eta(2.0, 1.0, p), 1.0);
  EXPECT_EQ(eta(2.0, 3.0, p), 0.0);
  p.r_kernel = RKernel::saturating(0.5);
  p.k = 3.0;
  EXPECT_DOUBLE_EQ(eta(2.0, 0.0, p), 1.5);
}

TEST(Validate, DefaultsAreAdmissible) { EXPECT_EQ(violated(ModelParams{}), ""); }

TEST(Validate, PositivityLabels) {
  ModelParams p;
  p.d2 = 0.0;
  EXPECT_EQ(violated(p), "A1");
  EXPECT_EQ(violated(p, nullptr, Validation::degenerate), "");
  p = {};
  p.henry = 0.0;
  EXPECT_EQ(violated(p, nullptr, Validation::degenerate), "A1");
  p = {};
  p.u1_d = -0.1;
  EXPECT_EQ(violated(p), "A1");
  p = {};
  p.u1_d = 0.0;
  EXPECT_EQ(violated(p), "");
}

TEST(Validate, ReactionCoefficientLabels) {
  ModelParams p;
  p.alpha = YCoefficient::constant(-1.0);
  EXPECT_EQ(violated(p), "A2");
  p = {};
  p.beta = YCoefficient::sampled({0.0, 1.0, 2.0});
  const GridSpec g = make_grid(1.0, 1.0, 4, 4);
  EXPECT_EQ(violated(p, &g), "A2");
  p.beta = YCoefficient::sampled({0.0, 1.0, 2.0, 1.0, 0.5});
  EXPECT_EQ(violated(p, &g), "");
}

TEST(Validate, KernelLabels) {
  ModelParams p;
  p.k = 0.0;
  EXPECT_EQ(violated(p), "A3");
  EXPECT_EQ(violated(p, nullptr, Validation::degenerate), "");
  p = {};
  p.q_kernel = QKernel::linear_decay(1.0, 0.0);
  EXPECT_EQ(violated(p), "A3");
  p = {};
  p.r_kernel = RKernel::saturating(-1.0);
  EXPECT_EQ(violated(p), "A3");
  p = {};
  p.q_kernel.c_bar = 0.0;
  EXPECT_EQ(violated(p), "A3");
}

TEST(Validate, SaturatingKernelMustIncreaseOnRange) {
  // With M3 beyond the cap, R is flat on part of [0, M3].
  ModelParams p;
  p.r_kernel = RKernel::saturating(0.5);
  p.m3 = 1.0;
  EXPECT_EQ(violated(p), "A3");
  p.m3 = 0.5;
  EXPECT_EQ(violated(p), "");
}

TEST(Validate, MessageCarriesLabel) {
  ModelParams p;
  p.d1 = -1.0;
  try {
    validate(p);
    FAIL();
  } catch (const ParameterError& e) {
    EXPECT_NE(std::string(e.what()).find("(A1)"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("d1"), std::string::npos);
  }
}
