#include <algorithm>
#include <cmath>
#include <limits>

#include "gauss_stab/hermite.hpp"
#include "gauss_stab/operators.hpp"

namespace gstab {

namespace {

constexpr double kWeightCeiling = 1e12;
constexpr double kUnweightCeiling = 1e12;
constexpr double kUnweightFloor = 1e-13;
// The residual window keeps exp(x^2 (1 - a) / (2a)) below this amplification.
constexpr double kResidualAmplification = 1e10;
// exp(-41.4) ~ 1e-18: kernel tail below which truncation is invisible.
constexpr double kKernelTailExponent = 41.4;

void check_slope(double a) {
  if (!(a > 0.0 && a < 1.0)) fail(ErrorCode::kInvalidArgument, "slope a must lie in (0, 1)");
}

void require_inside(const Grid& g, double b, const char* what) {
  const double slack = 1e-12 * std::max(1.0, std::abs(b));
  if (b < g.lo() - slack || b > g.hi() + slack) {
    fail(ErrorCode::kBreakpointOutOfRange,
         std::string(what) + " breakpoint " + std::to_string(b) + " lies outside " + describe(g));
  }
}

// int f(x) sign(x - b y) exp(-(x - y)^2 / 2) dx for every y on out_grid; slope b > 0.
GridFunction sign_kernel_transform(double b, const GridFunction& f, const Grid& out_grid) {
  const Grid& g = f.grid();
  std::vector<double> w(g.size());
  std::vector<double> out(out_grid.size());
  for (std::size_t j = 0; j < out_grid.size(); ++j) {
    const double y = out_grid.point(j);
    const double bp = b * y;
    require_inside(g, bp, "T_a");
    for (std::size_t k = 0; k < g.size(); ++k) {
      const double d = g.point(k) - y;
      w[k] = f[k] * std::exp(-0.5 * d * d);
    }
    out[j] = CubicAntiderivative(w, g.lo(), g.step()).signed_split(bp);
  }
  return GridFunction(out_grid, std::move(out));
}

double dawson_ratio_log_scale(int n, double a) {
  // log of sqrt(pi / (a(1 - a))) (2 pi / a)^n / (K_n * 2 sqrt(2/a) * z), z = sqrt(2/a) pi.
  const double c = a * (1.0 - a);
  const double z = std::sqrt(2.0 / a) * kPi;
  return 0.5 * std::log(kPi / c) + n * std::log(2.0 * kPi / a) -
         hermite_log_normalizer(n, a / (1.0 - a)) - std::log(2.0 * std::sqrt(2.0 / a) * z);
}

// |ratio(w)| where ratio = i^{n+1} r(w), r real with parity (-1)^{n-1}; returns r(w).
// The simple zeros at w = 0 cancel exactly: ratio ~ w^{n-1} exp(-beta w^2) / Dx(z w).
double ratio_real_part(int n, double a, double log_scale, double omega) {
  const double beta = kPi * kPi / (a * (1.0 - a));
  const double z = std::sqrt(2.0 / a) * kPi;
  const double dx = dawson_over_x(z * omega);
  if (!(dx > 1e-300)) {
    fail(ErrorCode::kDenominatorUnderflow,
         "denominator underflows at w = " + std::to_string(omega) + "; the omega grid is too wide");
  }
  if (n == 1) return std::exp(log_scale - beta * omega * omega) / dx;
  if (omega == 0.0) return 0.0;
  const double mag =
      std::exp(log_scale + (n - 1) * std::log(std::abs(omega)) - beta * omega * omega) / dx;
  return (omega < 0.0 && (n - 1) % 2 != 0) ? -mag : mag;
}

void check_omega_grid(const Grid& omega) {
  if (!(omega.lo() < 0.0 && omega.hi() > 0.0)) {
    fail(ErrorCode::kInvalidArgument, "omega grid must straddle 0");
  }
}

}  // namespace

GridFunction apply_T(double a, const GridFunction& f, const Grid& y_grid) {
  check_slope(a);
  return sign_kernel_transform(a, f, y_grid);
}

GridFunction apply_T_adjoint(double a, const GridFunction& g, const Grid& x_grid) {
  check_slope(a);
  const GridFunction t = sign_kernel_transform(1.0 / a, g, x_grid);
  std::vector<double> v(t.values().begin(), t.values().end());
  for (double& x : v) x = -x;
  return GridFunction(x_grid, std::move(v));
}

GridFunction apply_T_adjoint_direct(double a, const GridFunction& g, const Grid& x_grid) {
  check_slope(a);
  const Grid& yg = g.grid();
  std::vector<double> w(yg.size());
  std::vector<double> out(x_grid.size());
  for (std::size_t j = 0; j < x_grid.size(); ++j) {
    const double x = x_grid.point(j);
    // sign(x - a y) is +1 for y < x / a.
    const double bp = x / a;
    require_inside(yg, bp, "T*_a");
    for (std::size_t k = 0; k < yg.size(); ++k) {
      const double d = x - yg.point(k);
      w[k] = g[k] * std::exp(-0.5 * d * d);
    }
    const CubicAntiderivative c(w, yg.lo(), yg.step());
    const double below = c(bp);
    out[j] = below - (c.total() - below);
  }
  return GridFunction(x_grid, std::move(out));
}

GridFunction tilted_scaled_density(double a, const GridFunction& f) {
  check_slope(a);
  const Grid& g = f.grid();
  const double k = (1.0 - a) / (2.0 * a);
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.point(i);
    const double e = k * x * x;
    v[i] = f[i] == 0.0 ? 0.0 : f[i] * std::exp(e);
    if (!(std::abs(v[i]) <= kWeightCeiling)) {
      fail(ErrorCode::kWeightOverflow, "tilted density reaches " + std::to_string(v[i]) + " at x = " +
                                           std::to_string(x) + "; prior tails are too heavy");
    }
  }
  return GridFunction(Grid(g.lo() / a, g.hi() / a, g.size()), std::move(v));
}

GridFunction convolution_form(double a, const GridFunction& f) {
  const GridFunction big_f = tilted_scaled_density(a, f);
  const Grid& s = big_f.grid();
  const std::size_t n = s.size();
  const double h = s.step();

  std::vector<double> lags(2 * n - 1);
  for (std::size_t m = 0; m < lags.size(); ++m) {
    const double u = (static_cast<double>(m) - static_cast<double>(n - 1)) * h;
    lags[m] = u == 0.0 ? 0.0 : (u > 0.0 ? -1.0 : 1.0) * std::exp(-0.5 * a * u * u);
  }
  const auto conv = toeplitz_convolve(big_f.values(), lags, h);
  // Euler-Maclaurin correction for the unit jump of the kernel at the node itself.
  const auto slope = finite_difference(big_f.values(), h);

  const double reach = std::sqrt(2.0 * kKernelTailExponent / a);
  std::size_t first = n;
  std::size_t last = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const double z = s.point(j);
    if (z - reach >= s.lo() && z + reach <= s.hi()) {
      first = std::min(first, j);
      last = j;
    }
  }
  if (first > last || last - first < 1) {
    fail(ErrorCode::kInvalidArgument, "grid too narrow for the convolution form at this slope");
  }
  std::vector<double> out;
  out.reserve(last - first + 1);
  for (std::size_t j = first; j <= last; ++j) out.push_back(a * (conv[j] + h * h / 6.0 * slope[j]));
  const Grid window(s.point(first), s.point(last), out.size());
  return GridFunction(window, std::move(out));
}

double growth_estimate(const GridFunction& f_tilde_scaled, double window) {
  if (!(window > 0.0)) fail(ErrorCode::kInvalidArgument, "window must be positive");
  const Grid& g = f_tilde_scaled.grid();
  const LinearAntiderivative c(f_tilde_scaled);
  double best = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double y = g.point(k);
    best = std::max(best, c(y + window) - c(y - window));
  }
  return best;
}

double gaussian_moment_integral(int m, double beta) {
  if (m < 0 || !(beta > 0.0)) fail(ErrorCode::kInvalidArgument, "I_m needs m >= 0 and beta > 0");
  const double p = 0.5 * (m + 1.0);
  return std::exp(-p * std::log(beta) + std::lgamma(p));
}

double denominator_magnitude(double a, double omega) {
  check_slope(a);
  const double r = std::sqrt(2.0 / a);
  return 2.0 * r * std::abs(dawson(r * kPi * omega));
}

DenominatorBoundsReport denominator_bounds_check(double a, const Grid& omega) {
  DenominatorBoundsReport rep;
  rep.min_lower_slack = rep.min_upper_slack = std::numeric_limits<double>::infinity();
  const double nu_scale = std::sqrt(a) / (std::sqrt(2.0) * kPi);
  for (std::size_t k = 0; k < omega.size(); ++k) {
    const double w = omega.point(k);
    if (w == 0.0) continue;
    const double d = std::sqrt(a) * denominator_magnitude(a, nu_scale * w) / (2.0 * std::sqrt(2.0));
    const double num = -std::expm1(-w * w);
    const double lower = num / (2.0 * std::abs(w));
    const double upper = num / std::abs(w);
    ++rep.points;
    rep.min_lower_slack = std::min(rep.min_lower_slack, d - lower);
    rep.min_upper_slack = std::min(rep.min_upper_slack, upper - d);
    if (d < lower || d > upper) ++rep.violations;
  }
  return rep;
}

double phi_fourier_l1_norm(int n, double a, const Grid& omega_grid) {
  check_slope(a);
  if (n < 1) fail(ErrorCode::kInvalidArgument, "phi_n is defined for n >= 1");
  check_omega_grid(omega_grid);
  const double scale = dawson_ratio_log_scale(n, a);
  std::vector<double> mag(omega_grid.size());
  for (std::size_t k = 0; k < mag.size(); ++k) {
    mag[k] = std::abs(ratio_real_part(n, a, scale, omega_grid.point(k)));
  }
  return trapezoid(mag, omega_grid.step());
}

GridFunction adjoint_of_weighted(double a, const GridFunction& weighted, const Grid& x_grid,
                                 double window) {
  check_slope(a);
  const Grid& yg = weighted.grid();
  std::vector<double> pts;
  for (std::size_t j = 0; j < x_grid.size(); ++j) {
    if (std::abs(x_grid.point(j)) <= window) pts.push_back(x_grid.point(j));
  }
  if (pts.size() < 2) fail(ErrorCode::kInvalidArgument, "residual window holds fewer than two x nodes");
  const Grid out_grid(pts.front(), pts.back(), pts.size());

  std::vector<double> w(yg.size());
  std::vector<double> out(out_grid.size());
  for (std::size_t j = 0; j < out_grid.size(); ++j) {
    const double x = out_grid.point(j);
    const double c = x / a;
    require_inside(yg, c, "T*_a");
    for (std::size_t k = 0; k < yg.size(); ++k) {
      const double d = yg.point(k) - c;
      w[k] = weighted[k] * std::exp(-0.5 * a * d * d);
    }
    const CubicAntiderivative ca(w, yg.lo(), yg.step());
    const double below = ca(c);
    const double amp = std::exp(x * x * (1.0 - a) / (2.0 * a));
    out[j] = amp * (below - (ca.total() - below));
  }
  return GridFunction(out_grid, std::move(out));
}

PhiFunction construct_phi(int n, const OperatorConfig& config) {
  const double a = config.a;
  check_slope(a);
  if (n < 1) fail(ErrorCode::kInvalidArgument, "phi_n is defined for n >= 1");
  const Grid& og = config.omega_grid;
  check_omega_grid(og);
  const Grid& yg = config.y_grid;

  const double scale = dawson_ratio_log_scale(n, a);
  std::vector<double> r(og.size());
  std::vector<double> mag(og.size());
  for (std::size_t k = 0; k < og.size(); ++k) {
    r[k] = ratio_real_part(n, a, scale, og.point(k));
    mag[k] = std::abs(r[k]);
  }

  // weighted(y) = int i^{n+1} r(w) exp(2 pi i w y) dw. For odd n, r is even and only the
  // cosine part survives; for even n, r is odd and i^{n+1} * i leaves the sine part.
  const bool odd = n % 2 != 0;
  const int quarter = (n + 1) % 4;  // i^{n+1} = 1, i, -1, -i
  double phase;
  if (odd) {
    phase = quarter == 0 ? 1.0 : -1.0;  // i^{n+1} real
  } else {
    phase = quarter == 1 ? -1.0 : 1.0;  // i^{n+1} * i = i^{n+2}
  }
  std::vector<double> tw(og.size(), og.step());
  tw.front() *= 0.5;
  tw.back() *= 0.5;
  std::vector<double> weighted(yg.size());
  for (std::size_t j = 0; j < yg.size(); ++j) {
    const double y = yg.point(j);
    double acc = 0.0;
    for (std::size_t k = 0; k < og.size(); ++k) {
      if (r[k] == 0.0) continue;
      const double arg = 2.0 * kPi * og.point(k) * y;
      acc += tw[k] * r[k] * (odd ? std::cos(arg) : std::sin(arg));
    }
    weighted[j] = phase * acc;
  }

  PhiFunction phi{n, a, GridFunction(yg, std::move(weighted)), trapezoid(mag, og.step()), 0.0, 0.0};

  const double window_amp = std::sqrt(2.0 * a * std::log(kResidualAmplification) / (1.0 - a));
  const double window = std::min({window_amp, config.x_grid.hi(), -config.x_grid.lo(), a * yg.hi(),
                                  -a * yg.lo()});
  const GridFunction ts = adjoint_of_weighted(a, phi.weighted, config.x_grid, window);
  const double sigma2 = a / (1.0 - a);
  std::vector<double> diff_sq(ts.size());
  std::vector<double> h_sq(ts.size());
  for (std::size_t j = 0; j < ts.size(); ++j) {
    const double h = hermite_function(n, sigma2, ts.grid().point(j));
    diff_sq[j] = (ts[j] - h) * (ts[j] - h);
    h_sq[j] = h * h;
  }
  phi.adjoint_residual =
      std::sqrt(trapezoid(diff_sq, ts.grid().step()) / trapezoid(h_sq, ts.grid().step()));
  phi.residual_window = window;
  return phi;
}

GridFunction PhiFunction::unweighted(double window) const {
  const Grid& yg = weighted.grid();
  std::vector<double> pts;
  std::vector<double> vals;
  for (std::size_t k = 0; k < yg.size(); ++k) {
    const double y = yg.point(k);
    if (std::abs(y) > window) continue;
    const double factor = std::exp(0.5 * (1.0 - a) * y * y);
    if (factor > kUnweightCeiling && std::abs(weighted[k]) > kUnweightFloor) {
      fail(ErrorCode::kReconstructionOverflow,
           "unweighting phi_" + std::to_string(n) + " needs factor " + std::to_string(factor) +
               " at y = " + std::to_string(y));
    }
    pts.push_back(y);
    vals.push_back(weighted[k] * factor);
  }
  if (pts.size() < 2) fail(ErrorCode::kInvalidArgument, "window holds fewer than two nodes");
  return GridFunction(Grid(pts.front(), pts.back(), pts.size()), std::move(vals));
}

}  // namespace gstab
