#pragma once

// Observation model Y = X + Z, Z ~ N(0, 1): marginal, conditional mean,
// conditional median and the orthogonality residuals of both estimators.

#include <cstddef>

#include "gauss_stab/numerics.hpp"
#include "gauss_stab/priors.hpp"

namespace gstab {

/// y-grid [-8, 8] with 1025 points.
Grid default_y_grid();

/// Per-observation posterior summaries over a y-grid.
///
/// `first_moment` is int x f(x) phi(x - y) dx and `median_balance` is
/// int sign(x - psi(y)) f(x) phi(x - y) dx, with phi the standard normal
/// density; both are kept so the residual checks are single quadratures.
struct PosteriorField {
  Grid y_grid;
  GridFunction marginal;
  GridFunction first_moment;
  GridFunction cond_mean;
  GridFunction cond_median;
  GridFunction median_balance;
  double slope_a;
};

PosteriorField posterior_field(const GriddedDensity& prior, const Grid& y_grid);

/// Posterior CDF P(X <= x | Y = y) evaluated with the same quadrature as the median.
double posterior_cdf(const GriddedDensity& prior, double y, double x);

struct MonotonicityScan {
  double min_increment;
  std::size_t violations;  // increments below -1e-9
};

struct MonotonicityReport {
  MonotonicityScan median;
  MonotonicityScan mean;
};

MonotonicityReport monotonicity_audit(const PosteriorField& field);

/// E[(X - E[X|Y]) g(Y)]; g tabulated on the field's y-grid.
double orthogonality_residual_l2(const GriddedDensity& prior, const PosteriorField& field,
                                 const GridFunction& g);

/// E[sign(X - med(X|Y)) g(Y)]; g tabulated on the field's y-grid.
double orthogonality_residual_l1(const GriddedDensity& prior, const PosteriorField& field,
                                 const GridFunction& g);

}  // namespace gstab
