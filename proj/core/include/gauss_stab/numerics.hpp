#pragma once

// Uniform grids, tabulated functions, quadrature, convolution, 1-D solvers
// and the special functions every other module is built on.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gauss_stab/error.hpp"

namespace gstab {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSqrtPi = 1.77245385090551602730;
inline constexpr double kSqrt2Pi = 2.50662827463100050242;

/// Uniform grid lo + k*step, k = 0..n-1.
class Grid {
 public:
  Grid(double lo, double hi, std::size_t n);

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  std::size_t size() const noexcept { return n_; }
  double step() const noexcept { return step_; }

  double point(std::size_t k) const noexcept {
    return k + 1 == n_ ? hi_ : lo_ + static_cast<double>(k) * step_;
  }
  std::vector<double> points() const;

  bool contains(double x) const noexcept { return x >= lo_ && x <= hi_; }

  /// Index of the cell [x_k, x_{k+1}] holding x, clamped to [0, n-2].
  std::size_t cell_of(double x) const noexcept;

  /// Same interval with (n-1)*factor + 1 points; old nodes stay nodes.
  Grid refined(std::size_t factor) const;

  bool operator==(const Grid&) const = default;

 private:
  double lo_;
  double hi_;
  std::size_t n_;
  double step_;
};

std::string describe(const Grid& grid);

/// Function tabulated on a Grid. Values are finite and immutable.
template <typename T>
class BasicGridFunction {
 public:
  BasicGridFunction(Grid grid, std::vector<T> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
      fail(ErrorCode::kInvalidArgument, "grid function length " + std::to_string(values_.size()) +
                                            " does not match grid size " +
                                            std::to_string(grid_.size()));
    }
    for (const T& v : values_) {
      if (!is_finite(v)) fail(ErrorCode::kInvalidArgument, "grid function holds a non-finite value");
    }
  }

  template <typename Fn>
  static BasicGridFunction sample(const Grid& grid, Fn&& fn) {
    std::vector<T> v(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) v[k] = static_cast<T>(fn(grid.point(k)));
    return BasicGridFunction(grid, std::move(v));
  }

  const Grid& grid() const noexcept { return grid_; }
  std::span<const T> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  const T& operator[](std::size_t k) const noexcept { return values_[k]; }

  double max_abs() const noexcept {
    double m = 0.0;
    for (const T& v : values_) m = std::max(m, static_cast<double>(std::abs(v)));
    return m;
  }

 private:
  static bool is_finite(double v) { return std::isfinite(v); }
  static bool is_finite(const Complex& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

  Grid grid_;
  std::vector<T> values_;
};

using GridFunction = BasicGridFunction<double>;
using ComplexGridFunction = BasicGridFunction<Complex>;

// ---------------------------------------------------------------------------
// Quadrature

double trapezoid(std::span<const double> values, double step);
Complex trapezoid(std::span<const Complex> values, double step);

double trapezoid_integrate(const GridFunction& f);
Complex trapezoid_integrate(const ComplexGridFunction& f);

/// Cumulative trapezoid, starting at 0 on the left endpoint.
std::vector<double> cumulative_trapezoid(std::span<const double> values, double step);

double inner_product(const GridFunction& f, const GridFunction& g);
double l2_norm(const GridFunction& f);
double l1_norm(const GridFunction& f);

/// Composite Simpson rule for off-grid scalar integrands; `panels` is rounded up to even.
double simpson_integrate(const std::function<double(double)>& fn, double lo, double hi,
                         std::size_t panels);

/// Antiderivative of the piecewise cubic Hermite interpolant of tabulated data,
/// with nodal slopes from centred differences. At nodes it equals the trapezoid
/// rule plus the Euler-Maclaurin end correction, so partial integrals up to an
/// arbitrary breakpoint stay fourth-order accurate for smooth integrands.
class CubicAntiderivative {
 public:
  CubicAntiderivative(std::span<const double> values, double lo, double step);
  explicit CubicAntiderivative(const GridFunction& f);

  /// Integral from the left endpoint to x (clamped to the grid interval).
  double operator()(double x) const noexcept;
  double at_node(std::size_t k) const noexcept { return cumulative_[k]; }
  double total() const noexcept { return cumulative_.back(); }
  std::size_t size() const noexcept { return values_.size(); }
  double lo() const noexcept { return lo_; }
  double step() const noexcept { return step_; }

  /// Integral of sign(x - breakpoint) * f(x) over the grid interval.
  double signed_split(double breakpoint) const noexcept { return total() - 2.0 * (*this)(breakpoint); }

 private:
  std::vector<double> values_;
  std::vector<double> slopes_;
  std::vector<double> cumulative_;
  double lo_;
  double step_;
};

/// Antiderivative of the piecewise linear interpolant (trapezoid-consistent).
class LinearAntiderivative {
 public:
  explicit LinearAntiderivative(const GridFunction& f);
  double operator()(double x) const noexcept;
  double total() const noexcept { return cumulative_.back(); }

 private:
  std::vector<double> values_;
  std::vector<double> cumulative_;
  double lo_;
  double step_;
};

/// Fourth-order centred finite-difference derivative (second order at the ends).
std::vector<double> finite_difference(std::span<const double> values, double step);

/// Piecewise-linear interpolation of tabulated values; outside the grid the end values are held.
double interpolate_linear(const GridFunction& f, double x) noexcept;

// ---------------------------------------------------------------------------
// Convolution

enum class EdgePolicy { kChecked, kUnchecked };

/// h(x) = step * sum_k f(x_k) g(x - x_k) on the common grid, via a zero-padded FFT.
/// When -lo/step is not an integer the lags x - x_k fall between the nodes of g;
/// the full linear convolution is then evaluated at the grid nodes by
/// band-limited (Fourier) interpolation.
GridFunction fft_convolve(const GridFunction& f, const GridFunction& g,
                          EdgePolicy policy = EdgePolicy::kChecked);

/// h_j = step * sum_k f_k kernel(x_j - x_k), with the kernel known at exact lags
/// m*step for m = -(n-1)..(n-1) (`lag_values[m + n - 1]`).
std::vector<double> toeplitz_convolve(std::span<const double> f, std::span<const double> lag_values,
                                      double step);

/// Linear convolution of two real sequences (length a.size() + b.size() - 1).
std::vector<double> linear_convolve(std::span<const double> a, std::span<const double> b);

// ---------------------------------------------------------------------------
// One-dimensional solvers

/// Midpoint bisection until the bracket is narrower than tol.
double bisect_root(const std::function<double(double)>& fn, double lo, double hi, double tol);

struct MinimizeResult {
  double argmin;
  double min;
};

/// 64-point seed scan followed by golden-section search on the best bracket.
MinimizeResult golden_minimize(const std::function<double(double)>& fn, double lo, double hi,
                               double tol);

// ---------------------------------------------------------------------------
// Special functions

double erf(double x) noexcept;

/// Dawson's integral D(w) = exp(-w^2) * int_0^w exp(t^2) dt.
double dawson(double w) noexcept;

/// D(w)/w, continuous at w = 0 where it equals 1.
double dawson_over_x(double w) noexcept;

/// N(mean, variance) density and CDF.
double normal_pdf(double x, double mean, double variance) noexcept;
double normal_cdf(double x, double mean, double variance) noexcept;

}  // namespace gstab
