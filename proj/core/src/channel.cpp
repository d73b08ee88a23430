#include <algorithm>
#include <limits>

#include "gauss_stab/channel.hpp"

namespace gstab {

namespace {

constexpr double kMedianTol = 1e-10;
constexpr double kMarginalFloor = 1e-14;

std::vector<double> posterior_weights(const GriddedDensity& prior, double y) {
  const Grid& g = prior.grid();
  const auto& f = prior.density();
  std::vector<double> w(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double d = g.point(k) - y;
    w[k] = f[k] * std::exp(-0.5 * d * d) / kSqrt2Pi;
  }
  return w;
}

// Midpoint of {x : C(x) = total/2}; a flat stretch at level 1/2 resolves to its centre.
double median_of(const CubicAntiderivative& c, const Grid& grid) {
  const double total = c.total();
  if (!(total > 0.0) || !std::isfinite(total)) {
    fail(ErrorCode::kMedianBracketFailure, "posterior mass is numerically degenerate");
  }
  const double half = 0.5 * total;
  const std::size_t n = c.size();
  std::size_t first_above = 1;
  while (first_above < n && c.at_node(first_above) < half) ++first_above;
  std::size_t last_below = n - 2;
  while (last_below > 0 && c.at_node(last_below) > half) --last_below;
  if (first_above >= n) fail(ErrorCode::kMedianBracketFailure, "posterior CDF never reaches 1/2");

  auto level = [&](double x) { return c(x) - half; };
  const double left = bisect_root(level, grid.point(first_above - 1), grid.point(first_above), kMedianTol);
  const double right = bisect_root(level, grid.point(last_below), grid.point(last_below + 1), kMedianTol);
  return 0.5 * (left + right);
}

void require_field_grid(const PosteriorField& field, const GridFunction& g) {
  if (!(g.grid() == field.y_grid)) {
    fail(ErrorCode::kInvalidArgument, "test function must be tabulated on the field's y-grid");
  }
}

}  // namespace

Grid default_y_grid() { return Grid(-8.0, 8.0, 1025); }

PosteriorField posterior_field(const GriddedDensity& prior, const Grid& y_grid) {
  const Grid& xg = prior.grid();
  const std::size_t ny = y_grid.size();
  std::vector<double> marginal(ny);
  std::vector<double> first(ny);
  std::vector<double> mean(ny);
  std::vector<double> median(ny);
  std::vector<double> balance(ny);
  std::vector<double> xw(xg.size());

  for (std::size_t j = 0; j < ny; ++j) {
    const double y = y_grid.point(j);
    const auto w = posterior_weights(prior, y);
    for (std::size_t k = 0; k < w.size(); ++k) xw[k] = xg.point(k) * w[k];
    const double mass = trapezoid(w, xg.step());
    if (!(mass > kMarginalFloor)) {
      fail(ErrorCode::kMarginalUnderflow,
           "marginal density " + std::to_string(mass) + " at y = " + std::to_string(y) +
               " is below the reliable floor");
    }
    marginal[j] = mass;
    first[j] = trapezoid(xw, xg.step());
    mean[j] = first[j] / mass;

    const CubicAntiderivative c(w, xg.lo(), xg.step());
    median[j] = median_of(c, xg);
    balance[j] = c.signed_split(median[j]);
  }

  PosteriorField field{y_grid,
                       GridFunction(y_grid, std::move(marginal)),
                       GridFunction(y_grid, std::move(first)),
                       GridFunction(y_grid, std::move(mean)),
                       GridFunction(y_grid, std::move(median)),
                       GridFunction(y_grid, std::move(balance)),
                       prior.slope_a()};

  const auto audit = monotonicity_audit(field);
  if (audit.median.violations > 0) {
    fail(ErrorCode::kMedianBracketFailure,
         "conditional median decreases on the y-grid (min increment " +
             std::to_string(audit.median.min_increment) + "); the quadrature is unresolved");
  }
  return field;
}

double posterior_cdf(const GriddedDensity& prior, double y, double x) {
  const auto w = posterior_weights(prior, y);
  const CubicAntiderivative c(w, prior.grid().lo(), prior.grid().step());
  return c(x) / c.total();
}

MonotonicityReport monotonicity_audit(const PosteriorField& field) {
  auto scan = [](const GridFunction& v) {
    MonotonicityScan s{std::numeric_limits<double>::infinity(), 0};
    for (std::size_t k = 0; k + 1 < v.size(); ++k) {
      const double inc = v[k + 1] - v[k];
      s.min_increment = std::min(s.min_increment, inc);
      if (inc < -1e-9) ++s.violations;
    }
    return s;
  };
  return {scan(field.cond_median), scan(field.cond_mean)};
}

double orthogonality_residual_l2(const GriddedDensity& prior, const PosteriorField& field,
                                 const GridFunction& g) {
  require_field_grid(field, g);
  if (prior.slope_a() != field.slope_a) {
    fail(ErrorCode::kInvalidArgument, "posterior field was built from a different prior");
  }
  std::vector<double> integrand(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    integrand[j] = g[j] * (field.first_moment[j] - field.cond_mean[j] * field.marginal[j]);
  }
  return trapezoid(integrand, field.y_grid.step());
}

double orthogonality_residual_l1(const GriddedDensity& prior, const PosteriorField& field,
                                 const GridFunction& g) {
  require_field_grid(field, g);
  if (prior.slope_a() != field.slope_a) {
    fail(ErrorCode::kInvalidArgument, "posterior field was built from a different prior");
  }
  std::vector<double> integrand(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) integrand[j] = g[j] * field.median_balance[j];
  return trapezoid(integrand, field.y_grid.step());
}

}  // namespace gstab
