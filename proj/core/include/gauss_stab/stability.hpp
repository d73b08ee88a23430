#pragma once

// The two stability certificates: Levy-metric closeness from near-linearity of the
// conditional mean, and Hermite-coefficient bounds from near-linearity of the
// conditional median.

#include <vector>

#include "gauss_stab/channel.hpp"
#include "gauss_stab/numerics.hpp"
#include "gauss_stab/operators.hpp"
#include "gauss_stab/priors.hpp"

namespace gstab {

// ---------------------------------------------------------------------------
// L2 path

/// int (a y - E[X|Y=y])^2 f_Y(y) dy over the field's y-grid, a = prior.slope_a().
double l2_epsilon(const GriddedDensity& prior, const PosteriorField& field);

/// N(mean, variance) CDF tabulated on a grid.
GridFunction normal_cdf_on(const Grid& grid, double mean, double variance);

/// N(0, prior variance) CDF on the prior's step, widened to +-12 standard deviations when
/// the prior grid is too narrow for the reference to reach 0 and 1.
GridFunction gaussian_reference_cdf(const GriddedDensity& prior);

/// Worst violation of G(x - h) - h <= F(x) <= G(x + h) + h, floored at 0. Checked at the
/// nodes of both grids; off-grid values are linear interpolants, 0 / 1 beyond the grid.
double levy_violation(const GridFunction& F, const GridFunction& G, double h);

/// Smallest h with levy_violation(F, G, h) == 0, by bisection to 1e-10.
double levy_distance(const GridFunction& F, const GridFunction& G);

/// The bracketed expression minimised over delta.
double l2_bound_objective(double delta, double epsilon, double sigma2);

struct L2Bound {
  double bound = 1.0;
  double delta_star = 0.0;
  bool trivial = false;  // epsilon >= 1: bound is the trivial Levy bound 1
};

/// Throws kDomainError for epsilon <= 0.
L2Bound l2_bound(double epsilon, double sigma2);

struct EsseenReport {
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

/// sup |F - G| against (1/pi) int_{-T}^{T} |(phiF - phiG)/t| dt + 24 f_G_sup / (pi T).
EsseenReport esseen_check(const ComplexGridFunction& phiF, const ComplexGridFunction& phiG,
                          double f_G_sup, double T, const GridFunction& F, const GridFunction& G);

struct GapReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
};

/// g(y) = int g_hat(t) exp(i t y) dt on the field's y-grid, by the t-grid trapezoid rule.
std::vector<Complex> test_function_from_spectrum(const ComplexGridFunction& g_hat, const Grid& y_grid);

/// E[(X - aY) g(Y)] against (-i) int g_hat(t) phi~(t) exp(-t^2/2) dt.
GapReport fourier_orthogonality_check(const GriddedDensity& prior, const PosteriorField& field,
                                      const ComplexGridFunction& g_hat);

/// |phi(tau) - exp(-s tau^2/2)| against exp(-s tau^2/2) |int_0^tau exp(s t^2/2)(phi' + s t phi) dt|,
/// s the prior variance.
GapReport diff_char_check(const GriddedDensity& prior, double tau);

struct L2Certificate {
  double epsilon = 0.0;
  double levy = 0.0;
  double bound = 0.0;
  double delta_star = 0.0;
  bool trivial_bound = false;
  bool pass = false;
};

L2Certificate l2_certificate(const GriddedDensity& prior, const Grid& y_grid);

// ---------------------------------------------------------------------------
// L1 path

struct EnvelopeCell {
  int i = 0;       // covers [i, i + 1)
  double b = 0.0;  // sup |psi^{-1}(x) - x / a| on the covered part
};

struct DeviationEnvelope {
  std::vector<EnvelopeCell> cells;
  double sum = 0.0;
  double x_lo = 0.0;  // range of x where psi^{-1} is trusted
  double x_hi = 0.0;
  bool truncated = false;  // the trusted range ends short of the marginal's support
};

/// Unit-step envelope of |psi^{-1}(x) - x/a| over the y-range where the marginal exceeds
/// `marginal_floor`. Decreases below 1e-9 throw kMonotoneInversionFailure; smaller ones are
/// treated as flat stretches of the generalised inverse.
DeviationEnvelope deviation_envelope(const PosteriorField& field, double a,
                                     double marginal_floor = 1e-12);

/// int exp((1-a) y^2/2 - min_{|x - a y| <= r} (x - y)^2 / 2) |a y - psi(y)| dy, r = sqrt(2 a eps).
double assumption_integral(const PosteriorField& field, double a, double eps);

struct CoefficientBound {
  int n = 0;
  double c_n = 0.0;
  double phi_l1 = 0.0;
  double bound = 0.0;
  bool pass = false;
};

struct L1Certificate {
  double a = 0.0;  // linearising slope
  double eps_l1 = 0.0;
  double sup_dev = 0.0;
  double sup_dev_bound = 0.0;
  bool sup_dev_pass = false;
  double B = 0.0;
  double M = 0.0;
  double C0 = 0.0;
  DeviationEnvelope envelope;
  double weighted_T_l1 = 0.0;
  double weighted_T_edge = 0.0;  // |exp((1-a)y^2/2) T_a f| at the ends of the y range
  bool chain_pass = false;       // weighted_T_l1 <= 2 C0 sum b_i + 1e-6 (informational)
  std::vector<CoefficientBound> per_n;
  double tail_energy = 0.0;
  double corollary_sum = 0.0;  // sum |c_n| bound_n / eps_used, 0 when eps_used == 0
  bool pass = false;           // sup_dev_pass and every per_n pass
};

struct L1Options {
  Grid y_grid = default_y_grid();
  Grid omega_grid{-4.0, 4.0, 2049};
};

L1Certificate l1_certificate(const GriddedDensity& prior, int n_max, const L1Options& options = {});

}  // namespace gstab
