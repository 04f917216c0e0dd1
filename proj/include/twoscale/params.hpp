/**
 * @file params.hpp
 * @brief Physical parameters, reaction kernels and their validation.
 *
 * Violations are reported through ParameterError, which carries the label of
 * the violated structural assumption ("A1" .. "A4") so that front ends can
 * surface it.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "twoscale/grid.hpp"

namespace twoscale {

class ParameterError : public std::invalid_argument {
 public:
  ParameterError(std::string assumption, const std::string& what)
      : std::invalid_argument("(" + assumption + ") " + what), assumption_(std::move(assumption)) {}
  const std::string& assumption() const { return assumption_; }

 private:
  std::string assumption_;
};

/// Monotone rate factor R of the surface reaction. R(0) = 0 for every kind.
struct RKernel {
  enum class Kind { identity, saturating };
  Kind kind = Kind::identity;
  double cap = 0.0;  ///< saturation level for Kind::saturating

  double operator()(double r) const { return kind == Kind::identity ? r : std::min(r, cap); }

  static RKernel identity() { return {}; }
  static RKernel saturating(double cap) { return {Kind::saturating, cap}; }
};

/// Bounded factor Q of the surface reaction, 0 <= Q <= c_bar.
struct QKernel {
  enum class Kind { constant, linear_decay };
  Kind kind = Kind::constant;
  double c_bar = 1.0;
  double m4 = 0.0;  ///< zero of the linear decay

  double operator()(double s) const {
    if (kind == Kind::constant) return c_bar;
    return c_bar * std::max(0.0, 1.0 - s / m4);
  }

  static QKernel constant(double c_bar) { return {Kind::constant, c_bar, 0.0}; }
  static QKernel linear_decay(double c_bar, double m4) { return {Kind::linear_decay, c_bar, m4}; }
};

/// A micro reaction coefficient, either constant or sampled on Y_h.
class YCoefficient {
 public:
  YCoefficient() = default;
  static YCoefficient constant(double v) {
    YCoefficient c;
    c.constant_ = v;
    return c;
  }
  static YCoefficient sampled(std::vector<double> v) {
    YCoefficient c;
    c.samples_ = std::move(v);
    return c;
  }

  bool is_constant() const { return samples_.empty(); }
  double at(std::size_t j) const { return samples_.empty() ? constant_ : samples_[j]; }
  const std::vector<double>& samples() const { return samples_; }
  double constant_value() const { return constant_; }

  double min() const { return samples_.empty() ? constant_ : *std::min_element(samples_.begin(), samples_.end()); }
  bool all_finite() const {
    if (samples_.empty()) return std::isfinite(constant_);
    return std::all_of(samples_.begin(), samples_.end(), [](double v) { return std::isfinite(v); });
  }

 private:
  double constant_ = 0.0;
  std::vector<double> samples_;
};

struct ModelParams {
  double d1 = 1.0;
  double d2 = 1.0;
  double d3 = 1.0;
  double bi_m = 1.0;  ///< Biot number of the micro-macro transmission
  double henry = 1.0;
  double u1_d = 0.0;  ///< inlet Dirichlet value of the gas concentration
  double k = 1.0;     ///< surface reaction constant
  YCoefficient alpha = YCoefficient::constant(0.0);
  YCoefficient beta = YCoefficient::constant(0.0);
  RKernel r_kernel;
  QKernel q_kernel;
  std::optional<double> m3;  ///< sup bound on u3 used for kernel checks
  std::optional<double> m4;  ///< sup bound on u4 used for kernel checks
};

/// Strict checks the positivity assumptions as stated. Degenerate admits zero
/// diffusivities, Biot number and reaction constant so that decoupled
/// verification scenarios can be expressed.
enum class Validation { strict, degenerate };

/// zeta(r, s) = alpha r - beta s
inline double zeta(double r, double s, double alpha, double beta) { return alpha * r - beta * s; }

/// eta(r, s) = k R(r) Q(s) on the nonnegative quadrant, 0 elsewhere.
inline double eta(double r, double s, const ModelParams& p) {
  if (r < 0.0 || s < 0.0) return 0.0;
  return p.k * p.r_kernel(r) * p.q_kernel(s);
}

namespace detail {
inline void require(bool ok, const char* assumption, const std::string& what) {
  if (!ok) throw ParameterError(assumption, what);
}
}  // namespace detail

/// Throws ParameterError on the first violated assumption. When `grid` is
/// given, sampled alpha/beta must have N_y + 1 entries.
inline void validate(const ModelParams& p, const GridSpec* grid = nullptr, Validation mode = Validation::strict) {
  using detail::require;
  const bool strict = mode == Validation::strict;
  auto positive = [&](double v) { return std::isfinite(v) && (strict ? v > 0.0 : v >= 0.0); };
  require(positive(p.d1), "A1", "d1 must be positive");
  require(positive(p.d2), "A1", "d2 must be positive");
  require(positive(p.d3), "A1", "d3 must be positive");
  require(positive(p.bi_m), "A1", "Bi_M must be positive");
  require(std::isfinite(p.henry) && p.henry > 0.0, "A1", "H must be positive");
  require(std::isfinite(p.u1_d) && p.u1_d >= 0.0, "A1", "u1_D must be nonnegative");

  require(p.alpha.all_finite() && p.alpha.min() >= 0.0, "A2", "alpha must be nonnegative");
  require(p.beta.all_finite() && p.beta.min() >= 0.0, "A2", "beta must be nonnegative");
  if (grid) {
    const std::size_t n = static_cast<std::size_t>(grid->ny()) + 1;
    require(p.alpha.is_constant() || p.alpha.samples().size() == n, "A2",
            "alpha samples must have N_y+1 = " + std::to_string(n) + " entries");
    require(p.beta.is_constant() || p.beta.samples().size() == n, "A2",
            "beta samples must have N_y+1 = " + std::to_string(n) + " entries");
  }

  require(positive(p.k), "A3", "k must be positive");
  require(std::isfinite(p.q_kernel.c_bar) && p.q_kernel.c_bar > 0.0, "A3", "c_bar must be positive");
  if (p.m3) require(std::isfinite(*p.m3) && *p.m3 > 0.0, "A3", "M3 must be positive");
  if (p.m4) require(std::isfinite(*p.m4) && *p.m4 > 0.0, "A3", "M4 must be positive");
  if (p.r_kernel.kind == RKernel::Kind::saturating)
    require(std::isfinite(p.r_kernel.cap) && p.r_kernel.cap > 0.0, "A3", "saturating R needs a positive cap");
  if (p.q_kernel.kind == QKernel::Kind::linear_decay)
    require(std::isfinite(p.q_kernel.m4) && p.q_kernel.m4 > 0.0, "A3", "linear-decay Q needs a positive M4");

  // Sampled structural checks on [0, M3] x [0, M4].
  const double r_max = p.m3.value_or(p.r_kernel.kind == RKernel::Kind::saturating ? p.r_kernel.cap : 1.0);
  const double s_max = p.m4.value_or(p.q_kernel.kind == QKernel::Kind::linear_decay ? p.q_kernel.m4 : 1.0);
  constexpr int samples = 256;
  require(p.r_kernel(0.0) == 0.0, "A3", "R(0) must be 0");
  double prev = p.r_kernel(0.0);
  for (int n = 1; n <= samples; ++n) {
    const double r = r_max * n / samples;
    const double v = p.r_kernel(r);
    require(v > prev, "A3", "R must be strictly increasing on [0, M3]");
    require(v <= r, "A3", "R must be sublinear, R(r) <= r");
    prev = v;
  }
  for (int n = 0; n <= samples; ++n) {
    const double q = p.q_kernel(s_max * n / samples);
    require(q >= 0.0 && q <= p.q_kernel.c_bar, "A3", "Q must satisfy 0 <= Q <= c_bar on [0, M4]");
  }
}

}  // namespace twoscale
