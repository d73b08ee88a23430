#pragma once

// The linearity operator T_a[f](y) = int f(x) sign(x - a y) exp(-(x - y)^2 / 2) dx,
// its adjoint, the tilted convolution form and the dual functions phi_n.
//
// Fourier convention: F[f](w) = int f(t) exp(-2 pi i w t) dt.

#include <vector>

#include "gauss_stab/numerics.hpp"

namespace gstab {

struct OperatorConfig {
  double a = 0.5;
  Grid x_grid{-8.0, 8.0, 1025};
  Grid y_grid{-24.0, 24.0, 6145};
  Grid omega_grid{-4.0, 4.0, 2049};
};

/// T_a f on y_grid; f tabulated on its own grid. The breakpoint a*y must lie in f's grid.
GridFunction apply_T(double a, const GridFunction& f, const Grid& y_grid);

/// T*_a g = -T_{1/a} g on x_grid; g tabulated on a y-grid that contains every x/a.
GridFunction apply_T_adjoint(double a, const GridFunction& g, const Grid& x_grid);

/// T*_a g(x) = int g(y) sign(x - a y) exp(-(x - y)^2 / 2) dy, evaluated straight from the kernel.
GridFunction apply_T_adjoint_direct(double a, const GridFunction& g, const Grid& x_grid);

/// F(s) = f~(a s) with f~(x) = exp(x^2 (1 - a) / (2a)) f(x), on the grid s_k = x_k / a.
/// Throws kWeightOverflow if f~ exceeds 1e12.
GridFunction tilted_scaled_density(double a, const GridFunction& f);

/// exp((1 - a) y^2 / 2) T_a f(y) = a int f~(a s) sign(s - y) exp(-a (s - y)^2 / 2) ds,
/// evaluated by a Toeplitz convolution on the nodes s_k = x_k / a. Only nodes whose
/// kernel tail stays inside the tabulated range (kernel below ~1e-18 at the edge)
/// are returned.
GridFunction convolution_form(double a, const GridFunction& f);

/// C0 = sup over grid-aligned centres y of int_{y - window}^{y + window} F(s) ds.
double growth_estimate(const GridFunction& f_tilde_scaled, double window = 0.5);

/// I_m = int |w|^m exp(-beta w^2) dw = beta^{-(m+1)/2} Gamma((m+1)/2).
double gaussian_moment_integral(int m, double beta);

/// |F[sign(x) exp(-a x^2 / 2)](w)| = 2 sqrt(2/a) D(sqrt(2/a) pi w).
double denominator_magnitude(double a, double omega);

struct DenominatorBoundsReport {
  std::size_t points = 0;
  std::size_t violations = 0;
  double min_lower_slack = 0.0;  // min of D - lower
  double min_upper_slack = 0.0;  // min of upper - D
};

/// Two-sided bounds (1 - e^{-w^2})/(2|w|) <= D(w) <= (1 - e^{-w^2})/|w|, with D read
/// back from the denominator as |sqrt(a) c(sqrt(a) w / (sqrt(2) pi))| / (2 sqrt(2)).
DenominatorBoundsReport denominator_bounds_check(double a, const Grid& omega);

struct PhiFunction {
  int n = 1;
  double a = 0.5;
  GridFunction weighted;  // exp(-(1 - a) y^2 / 2) phi_n(y) on the y-grid
  double fourier_l1_norm = 0.0;
  double adjoint_residual = 0.0;  // ||T*_a phi_n - H_n||_2 / ||H_n||_2 over the window
  double residual_window = 0.0;   // |x| bound used for the residual

  /// phi_n on |y| <= window. Throws kReconstructionOverflow if the unweighting factor
  /// exceeds 1e12 where |weighted| > 1e-13.
  GridFunction unweighted(double window) const;
};

/// ||F[phi_0 phi_n]||_1 = int |ratio| dw on the omega grid, without building phi_n.
double phi_fourier_l1_norm(int n, double a, const Grid& omega_grid);

PhiFunction construct_phi(int n, const OperatorConfig& config);

/// T*_a phi_n on the x-grid points with |x| <= window, computed from the weighted form
/// with the exponential factors combined before evaluation.
GridFunction adjoint_of_weighted(double a, const GridFunction& weighted, const Grid& x_grid,
                                 double window);

}  // namespace gstab
