/**
 * @file grid.hpp
 * @brief Equidistant macro/micro grids, grid functions and the weighted
 *        discrete L2 inner products.
 *
 * The macro grid covers [0, L] with N_x subintervals, the micro cell grid
 * covers [0, ell] with N_y subintervals. Micro grid functions live on the
 * tensor grid and are stored row-major with the macro index i as the slow
 * index, so the cell problem attached to node x_i is contiguous.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace twoscale {

class InvalidGrid : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ShapeMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Trapezoid weights gamma^1 (macro nodes) and gamma^2 (micro nodes).
struct QuadWeights {
  std::vector<double> gamma1;
  std::vector<double> gamma2;
};

class GridSpec;
GridSpec make_grid(double L, double ell, int nx, int ny);

class GridSpec {
 public:
  double L() const { return L_; }
  double ell() const { return ell_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double hx() const { return L_ / nx_; }
  double hy() const { return ell_ / ny_; }

  double x(int i) const { return i * hx(); }
  double y(int j) const { return j * hy(); }
  /// Staggered nodes x_{i+1/2}, y_{j+1/2}.
  double x_half(int i) const { return (i + 0.5) * hx(); }
  double y_half(int j) const { return (j + 0.5) * hy(); }

  const QuadWeights& weights() const { return weights_; }
  double gamma1(int i) const { return weights_.gamma1[static_cast<std::size_t>(i)]; }
  double gamma2(int j) const { return weights_.gamma2[static_cast<std::size_t>(j)]; }

  bool operator==(const GridSpec& o) const {
    return L_ == o.L_ && ell_ == o.ell_ && nx_ == o.nx_ && ny_ == o.ny_;
  }

 private:
  friend GridSpec make_grid(double, double, int, int);
  GridSpec(double L, double ell, int nx, int ny) : L_(L), ell_(ell), nx_(nx), ny_(ny) {
    weights_.gamma1.assign(static_cast<std::size_t>(nx) + 1, 1.0);
    weights_.gamma2.assign(static_cast<std::size_t>(ny) + 1, 1.0);
    weights_.gamma1.front() = weights_.gamma1.back() = 0.5;
    weights_.gamma2.front() = weights_.gamma2.back() = 0.5;
  }

  double L_;
  double ell_;
  int nx_;
  int ny_;
  QuadWeights weights_;
};

inline GridSpec make_grid(double L, double ell, int nx, int ny) {
  if (!(L > 0.0) || !std::isfinite(L))
    throw InvalidGrid("macro length L must be positive, got " + std::to_string(L));
  if (!(ell > 0.0) || !std::isfinite(ell))
    throw InvalidGrid("cell length ell must be positive, got " + std::to_string(ell));
  if (nx < 2) throw InvalidGrid("N_x must be >= 2, got " + std::to_string(nx));
  if (ny < 2) throw InvalidGrid("N_y must be >= 2, got " + std::to_string(ny));
  return GridSpec(L, ell, nx, ny);
}

// ---------------------------------------------------------------------------
// Grid functions

namespace layout {
// Shapes of the four grid-function families. rows() x cols() entries.
struct MacroNodes {
  static std::size_t rows(const GridSpec&) { return 1; }
  static std::size_t cols(const GridSpec& g) { return static_cast<std::size_t>(g.nx()) + 1; }
  static constexpr const char* name = "macro node field";
};
struct MacroEdges {
  static std::size_t rows(const GridSpec&) { return 1; }
  static std::size_t cols(const GridSpec& g) { return static_cast<std::size_t>(g.nx()); }
  static constexpr const char* name = "macro edge field";
};
struct MicroNodes {
  static std::size_t rows(const GridSpec& g) { return static_cast<std::size_t>(g.nx()) + 1; }
  static std::size_t cols(const GridSpec& g) { return static_cast<std::size_t>(g.ny()) + 1; }
  static constexpr const char* name = "micro node field";
};
struct MicroEdges {
  static std::size_t rows(const GridSpec& g) { return static_cast<std::size_t>(g.nx()) + 1; }
  static std::size_t cols(const GridSpec& g) { return static_cast<std::size_t>(g.ny()); }
  static constexpr const char* name = "micro edge field";
};
}  // namespace layout

/// Dense grid function. Vectors (rows() == 1) are indexed with [i], matrices
/// with (i, j).
template <class Layout>
class GridFunction {
 public:
  GridFunction() = default;
  explicit GridFunction(const GridSpec& g, double fill = 0.0)
      : rows_(Layout::rows(g)), cols_(Layout::cols(g)), data_(rows_ * cols_, fill) {}
  GridFunction(std::size_t rows, std::size_t cols, std::vector<double> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) throw ShapeMismatch(std::string(Layout::name) + ": data size mismatch");
  }
  /// Vector-shaped construction from explicit values.
  explicit GridFunction(std::vector<double> values)
      : rows_(1), cols_(values.size()), data_(std::move(values)) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }
  std::vector<double>& raw() { return data_; }
  const std::vector<double>& raw() const { return data_; }

  bool matches(const GridSpec& g) const { return rows_ == Layout::rows(g) && cols_ == Layout::cols(g); }
  bool same_shape(const GridFunction& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

  bool all_finite() const {
    for (double v : data_)
      if (!std::isfinite(v)) return false;
    return true;
  }

  void fill(double v) { std::fill(data_.begin(), data_.end(), v); }

  bool operator==(const GridFunction&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// u_h in G_h, indexed i = 0..N_x. Index 0 is dropped for the G_h^o view.
using MacroField = GridFunction<layout::MacroNodes>;
/// v_h in E_h, entry i holds v_{i+1/2}, i = 0..N_x-1.
using MacroEdgeField = GridFunction<layout::MacroEdges>;
/// u_h in F_h, entry (i, j) holds u_{ij}.
using MicroField = GridFunction<layout::MicroNodes>;
/// v_h in H_h, entry (i, j) holds v_{i,j+1/2}, j = 0..N_y-1.
using MicroEdgeField = GridFunction<layout::MicroEdges>;

template <class Layout>
void require_shape(const GridSpec& g, const GridFunction<Layout>& u, const char* what) {
  if (!u.matches(g))
    throw ShapeMismatch(std::string(what) + ": " + Layout::name + " has shape " + std::to_string(u.rows()) + "x" +
                        std::to_string(u.cols()) + ", grid expects " + std::to_string(Layout::rows(g)) + "x" +
                        std::to_string(Layout::cols(g)));
}

/// Sample f(x_i) on the macro nodes.
template <class F>
MacroField sample_macro(const GridSpec& g, F&& f) {
  MacroField u(g);
  for (int i = 0; i <= g.nx(); ++i) u[static_cast<std::size_t>(i)] = f(g.x(i));
  return u;
}

/// Sample f(x_i, y_j) on the micro nodes.
template <class F>
MicroField sample_micro(const GridSpec& g, F&& f) {
  MicroField u(g);
  for (int i = 0; i <= g.nx(); ++i)
    for (int j = 0; j <= g.ny(); ++j) u(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = f(g.x(i), g.y(j));
  return u;
}

// ---------------------------------------------------------------------------
// Inner products

enum class Summation { naive, pairwise };
enum class Restriction { full, interior };  // interior: G_h^o, i = 1..N_x

namespace detail {

/// Shortest text that round-trips a double: 17 significant digits.
inline std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}


inline double pairwise_sum(std::span<const double> t) {
  if (t.size() <= 8) {
    double s = 0.0;
    for (double v : t) s += v;
    return s;
  }
  const std::size_t half = t.size() / 2;
  return pairwise_sum(t.first(half)) + pairwise_sum(t.subspan(half));
}

/// Collects terms and reduces them either in order or pairwise.
class Accumulator {
 public:
  explicit Accumulator(Summation mode) : mode_(mode) {}
  void add(double v) {
    if (mode_ == Summation::naive)
      sum_ += v;
    else
      terms_.push_back(v);
  }
  double result() const { return mode_ == Summation::naive ? sum_ : pairwise_sum(terms_); }

 private:
  Summation mode_;
  double sum_ = 0.0;
  std::vector<double> terms_;
};

}  // namespace detail

/// (u, v)_{G_h} = h_x sum gamma^1_i u_i v_i; with Restriction::interior the
/// sum runs over i = 1..N_x (the G_h^o product).
inline double ip_macro(const GridSpec& g, const MacroField& u, const MacroField& v,
                       Restriction r = Restriction::full, Summation mode = Summation::naive) {
  require_shape(g, u, "ip_macro");
  require_shape(g, v, "ip_macro");
  detail::Accumulator acc(mode);
  for (int i = (r == Restriction::full ? 0 : 1); i <= g.nx(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    acc.add(g.gamma1(i) * u[k] * v[k]);
  }
  return g.hx() * acc.result();
}

inline double ip_micro(const GridSpec& g, const MicroField& u, const MicroField& v,
                       Summation mode = Summation::naive) {
  require_shape(g, u, "ip_micro");
  require_shape(g, v, "ip_micro");
  detail::Accumulator acc(mode);
  for (int i = 0; i <= g.nx(); ++i)
    for (int j = 0; j <= g.ny(); ++j) {
      const auto a = static_cast<std::size_t>(i), b = static_cast<std::size_t>(j);
      acc.add(g.gamma1(i) * g.gamma2(j) * u(a, b) * v(a, b));
    }
  return g.hx() * g.hy() * acc.result();
}

/// (u, v)_{E_h}: staggered nodes carry no weight.
inline double ip_macro_edge(const GridSpec& g, const MacroEdgeField& u, const MacroEdgeField& v,
                            Summation mode = Summation::naive) {
  require_shape(g, u, "ip_macro_edge");
  require_shape(g, v, "ip_macro_edge");
  detail::Accumulator acc(mode);
  for (std::size_t i = 0; i < u.size(); ++i) acc.add(u[i] * v[i]);
  return g.hx() * acc.result();
}

/// (u, v)_{H_h}: only the macro weight gamma^1_i appears.
inline double ip_micro_edge(const GridSpec& g, const MicroEdgeField& u, const MicroEdgeField& v,
                            Summation mode = Summation::naive) {
  require_shape(g, u, "ip_micro_edge");
  require_shape(g, v, "ip_micro_edge");
  detail::Accumulator acc(mode);
  for (int i = 0; i <= g.nx(); ++i)
    for (int j = 0; j < g.ny(); ++j) {
      const auto a = static_cast<std::size_t>(i), b = static_cast<std::size_t>(j);
      acc.add(g.gamma1(i) * u(a, b) * v(a, b));
    }
  return g.hx() * g.hy() * acc.result();
}

inline double norm_macro(const GridSpec& g, const MacroField& u) { return std::sqrt(ip_macro(g, u, u)); }
inline double norm_micro(const GridSpec& g, const MicroField& u) { return std::sqrt(ip_micro(g, u, u)); }
inline double norm_macro_edge(const GridSpec& g, const MacroEdgeField& u) { return std::sqrt(ip_macro_edge(g, u, u)); }
inline double norm_micro_edge(const GridSpec& g, const MicroEdgeField& u) { return std::sqrt(ip_micro_edge(g, u, u)); }

enum class TraceSide { y0, yell };

/// Restriction u_h|_{y=0} or u_h|_{y=ell} as a macro field.
inline MacroField trace(const MicroField& u, TraceSide side) {
  const std::size_t j = side == TraceSide::y0 ? 0 : u.cols() - 1;
  std::vector<double> out(u.rows());
  for (std::size_t i = 0; i < u.rows(); ++i) out[i] = u(i, j);
  return MacroField(std::move(out));
}

}  // namespace twoscale
