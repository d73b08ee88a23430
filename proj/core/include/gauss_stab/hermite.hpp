#pragma once

#include <vector>

#include "gauss_stab/numerics.hpp"

namespace gstab {

/// Orthonormal Hermite functions with scale sigma^2 = a / (1 - a):
///   H_n(x) = (1/K_n) exp(x^2 / (2 sigma^2)) d^n/dx^n exp(-x^2 / sigma^2),
///   K_n    = pi^(1/4) 2^(n/2) sqrt(n!) / sigma^(n - 1/2).
/// The (-1)^n produced by the derivative is kept.
class HermiteBasis {
 public:
  static constexpr int kMaxOrder = 512;

  HermiteBasis(double a, int max_order, const Grid& grid);

  double a() const noexcept { return a_; }
  double sigma2() const noexcept { return sigma2_; }
  int max_order() const noexcept { return max_order_; }
  const Grid& grid() const noexcept { return functions_.front().grid(); }

  const GridFunction& function(int n) const { return functions_.at(static_cast<std::size_t>(n)); }
  const std::vector<GridFunction>& functions() const noexcept { return functions_; }

  /// log K_n; K_n itself overflows a double well before n = 512.
  double log_normalizer(int n) const { return log_normalizers_.at(static_cast<std::size_t>(n)); }
  double normalizer(int n) const { return std::exp(log_normalizer(n)); }

 private:
  double a_;
  double sigma2_;
  int max_order_;
  std::vector<GridFunction> functions_;
  std::vector<double> log_normalizers_;
};

HermiteBasis build_basis(double a, int max_order, const Grid& grid);

/// log K_n straight from the closed form, via lgamma.
double hermite_log_normalizer(int n, double sigma2);

/// H_n at a single point, by the same normalised recurrence the basis uses.
double hermite_function(int n, double sigma2, double x);

/// Gram matrix <H_k, H_n> by trapezoid quadrature.
std::vector<std::vector<double>> gram_matrix(const HermiteBasis& basis);

/// max |G - I| over all entries.
double gram_deviation(const HermiteBasis& basis);

struct CoefficientSet {
  std::vector<double> values;  // c_0..c_N
  /// Set for N > 64, where the coefficients are re-extracted on a 2x refined grid.
  bool high_order = false;
  /// max_n |c_n - c_n(refined)| when high_order, else 0.
  double refinement_delta = 0.0;
};

/// Zero-padded copy of f on a symmetric grid with the same step, wide enough that
/// H_0..H_{n_max} at scale sigma2 are negligible at the ends. Returns f unchanged when
/// its grid already is.
GridFunction pad_for_basis(const GridFunction& f, double sigma2, int n_max);

/// c_n = <f, H_n> by trapezoid quadrature.
CoefficientSet hermite_coefficients(const GridFunction& f, const HermiteBasis& basis);

}  // namespace gstab
