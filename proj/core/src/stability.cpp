#include <algorithm>
#include <cmath>
#include <limits>

#include "gauss_stab/hermite.hpp"
#include "gauss_stab/stability.hpp"

namespace gstab {

namespace {

constexpr double kCdfTol = 1e-8;
constexpr double kLevyTol = 1e-10;

void require_cdf(const GridFunction& F, const char* name) {
  for (std::size_t k = 0; k + 1 < F.size(); ++k) {
    if (F[k + 1] < F[k] - kCdfTol) {
      fail(ErrorCode::kNotACdf, std::string(name) + " decreases at x = " + std::to_string(F.grid().point(k)));
    }
  }
  if (F[0] < -kCdfTol || F[0] > kCdfTol || std::abs(F[F.size() - 1] - 1.0) > kCdfTol) {
    fail(ErrorCode::kNotACdf, std::string(name) + " does not run from 0 to 1 over its grid");
  }
}

double cdf_at(const GridFunction& G, double x) {
  if (x <= G.grid().lo()) return 0.0;
  if (x >= G.grid().hi()) return 1.0;
  return std::clamp(interpolate_linear(G, x), 0.0, 1.0);
}

double sq(double v) { return v * v; }

}  // namespace

double l2_epsilon(const GriddedDensity& prior, const PosteriorField& field) {
  const double a = prior.slope_a();
  std::vector<double> v(field.y_grid.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    v[j] = sq(a * field.y_grid.point(j) - field.cond_mean[j]) * field.marginal[j];
  }
  return trapezoid(v, field.y_grid.step());
}

GridFunction normal_cdf_on(const Grid& grid, double mean, double variance) {
  return GridFunction::sample(grid, [&](double x) { return normal_cdf(x, mean, variance); });
}

GridFunction gaussian_reference_cdf(const GriddedDensity& prior) {
  const Grid& g = prior.grid();
  const double sd = std::sqrt(prior.variance());
  const double h = g.step();
  const double lo = std::min(g.lo(), -std::ceil(12.0 * sd / h) * h);
  const double hi = std::max(g.hi(), std::ceil(12.0 * sd / h) * h);
  const auto n = static_cast<std::size_t>(std::llround((hi - lo) / h)) + 1;
  return normal_cdf_on(Grid(lo, hi, n), 0.0, prior.variance());
}

double levy_violation(const GridFunction& F, const GridFunction& G, double h) {
  // The condition is equivalent to F(u - h) - h <= G(u) <= F(u + h) + h; testing both forms
  // on both grids keeps the discrete distance symmetric.
  auto one_sided = [h](const GridFunction& P, const GridFunction& Q) {
    double worst = 0.0;
    for (std::size_t k = 0; k < P.size(); ++k) {
      const double x = P.grid().point(k);
      worst = std::max(worst, cdf_at(Q, x - h) - h - P[k]);
      worst = std::max(worst, P[k] - cdf_at(Q, x + h) - h);
    }
    return worst;
  };
  return std::max(one_sided(F, G), one_sided(G, F));
}

double levy_distance(const GridFunction& F, const GridFunction& G) {
  require_cdf(F, "F");
  require_cdf(G, "G");
  if (levy_violation(F, G, 0.0) <= 0.0) return 0.0;
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > kLevyTol) {
    const double mid = 0.5 * (lo + hi);
    (levy_violation(F, G, mid) > 0.0 ? lo : hi) = mid;
  }
  return hi;
}

double l2_bound_objective(double delta, double epsilon, double sigma2) {
  const double first = 2.0 * (1.0 + sigma2) / kPi * std::pow(epsilon, delta / (2.0 * (1.0 + delta)));
  const double second =
      24.0 / (kPi * std::sqrt(2.0 * kPi * sigma2 / (1.0 + delta) * std::log(1.0 / epsilon)));
  return first + second;
}

L2Bound l2_bound(double epsilon, double sigma2) {
  if (!(sigma2 > 0.0)) fail(ErrorCode::kInvalidArgument, "sigma2 must be positive");
  if (!(epsilon > 0.0)) fail(ErrorCode::kDomainError, "epsilon must be positive; exact linearity has bound 0");
  if (epsilon >= 1.0) return {1.0, 0.0, true};
  const auto r = golden_minimize(
      [&](double log_delta) { return l2_bound_objective(std::exp(log_delta), epsilon, sigma2); },
      std::log(1e-6), std::log(1e3), 1e-12);
  return {r.min, std::exp(r.argmin), false};
}

EsseenReport esseen_check(const ComplexGridFunction& phiF, const ComplexGridFunction& phiG,
                          double f_G_sup, double T, const GridFunction& F, const GridFunction& G) {
  if (!(phiF.grid() == phiG.grid())) fail(ErrorCode::kInvalidArgument, "characteristic functions on different grids");
  if (!(T > 0.0)) fail(ErrorCode::kInvalidArgument, "T must be positive");
  const Grid& tg = phiF.grid();
  if (T > tg.hi() || -T < tg.lo()) fail(ErrorCode::kInvalidArgument, "T exceeds the t-grid");

  EsseenReport rep;
  for (std::size_t k = 0; k < F.size(); ++k) {
    rep.lhs = std::max(rep.lhs, std::abs(F[k] - cdf_at(G, F.grid().point(k))));
  }

  std::vector<double> diff(tg.size());
  auto integrand = [&](std::size_t k) {
    const double t = tg.point(k);
    if (std::abs(t) > 1e-12) return std::abs((phiF[k] - phiG[k]) / t);
    // Limit |phiF'(0) - phiG'(0)| by centred differences.
    const std::size_t l = k == 0 ? k : k - 1;
    const std::size_t r = k + 1 == tg.size() ? k : k + 1;
    const Complex dF = (phiF[r] - phiF[l]) / (tg.point(r) - tg.point(l));
    const Complex dG = (phiG[r] - phiG[l]) / (tg.point(r) - tg.point(l));
    return std::abs(dF - dG);
  };
  for (std::size_t k = 0; k < tg.size(); ++k) diff[k] = integrand(k);
  const GridFunction d(tg, std::move(diff));
  const LinearAntiderivative c(d);
  const double integral = c(T) - c(-T);
  rep.rhs = integral / kPi + 24.0 * f_G_sup / (kPi * T);
  rep.pass = rep.lhs <= rep.rhs + 1e-9;
  return rep;
}

std::vector<Complex> test_function_from_spectrum(const ComplexGridFunction& g_hat, const Grid& y_grid) {
  const Grid& tg = g_hat.grid();
  std::vector<double> w(tg.size(), tg.step());
  w.front() *= 0.5;
  w.back() *= 0.5;
  std::vector<Complex> g(y_grid.size());
  for (std::size_t j = 0; j < y_grid.size(); ++j) {
    const double y = y_grid.point(j);
    Complex acc{};
    for (std::size_t k = 0; k < tg.size(); ++k) {
      if (g_hat[k] == Complex{}) continue;
      acc += w[k] * g_hat[k] * std::polar(1.0, tg.point(k) * y);
    }
    g[j] = acc;
  }
  return g;
}

GapReport fourier_orthogonality_check(const GriddedDensity& prior, const PosteriorField& field,
                                      const ComplexGridFunction& g_hat) {
  const double a = prior.slope_a();
  const auto g = test_function_from_spectrum(g_hat, field.y_grid);
  std::vector<Complex> lhs_v(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double y = field.y_grid.point(j);
    lhs_v[j] = g[j] * (field.first_moment[j] - a * y * field.marginal[j]);
  }
  const Complex lhs = trapezoid(lhs_v, field.y_grid.step());

  const auto cf = char_fn(prior, g_hat.grid());
  const Grid& tg = g_hat.grid();
  std::vector<Complex> rhs_v(tg.size());
  for (std::size_t k = 0; k < tg.size(); ++k) {
    const double t = tg.point(k);
    rhs_v[k] = g_hat[k] * cf.phi_tilde[k] * std::exp(-0.5 * t * t);
  }
  const Complex rhs = Complex(0.0, -1.0) * trapezoid(rhs_v, tg.step());
  return {std::abs(lhs), std::abs(rhs), std::abs(lhs - rhs)};
}

GapReport diff_char_check(const GriddedDensity& prior, double tau) {
  const double s = prior.variance();
  const Complex phi_tau = char_fn_at(prior, tau).first;
  const double g_tau = std::exp(-0.5 * s * tau * tau);
  const double lhs = std::abs(phi_tau - g_tau);

  constexpr std::size_t kPanels = 2000;
  const double h = tau / static_cast<double>(kPanels);
  Complex acc{};
  for (std::size_t k = 0; k <= kPanels; ++k) {
    const double t = h * static_cast<double>(k);
    const auto [p, dp] = char_fn_at(prior, t);
    const Complex v = std::exp(0.5 * s * t * t) * (dp + s * t * p);
    const double w = (k == 0 || k == kPanels) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    acc += w * v;
  }
  const double rhs = g_tau * std::abs(acc * h / 3.0);
  return {lhs, rhs, std::abs(lhs - rhs)};
}

L2Certificate l2_certificate(const GriddedDensity& prior, const Grid& y_grid) {
  const PosteriorField field = posterior_field(prior, y_grid);
  L2Certificate cert;
  cert.epsilon = l2_epsilon(prior, field);
  const GridFunction G = gaussian_reference_cdf(prior);
  std::vector<double> F(prior.cdf().values().begin(), prior.cdf().values().end());
  for (double& v : F) v = std::clamp(v, 0.0, 1.0);
  cert.levy = levy_distance(GridFunction(prior.grid(), std::move(F)), G);
  if (cert.epsilon <= 0.0) {
    cert.bound = 0.0;
    cert.pass = cert.levy <= 1e-6;
    return cert;
  }
  const L2Bound b = l2_bound(cert.epsilon, prior.variance());
  cert.bound = b.bound;
  cert.delta_star = b.delta_star;
  cert.trivial_bound = b.trivial;
  cert.pass = cert.levy <= cert.bound;
  return cert;
}

DeviationEnvelope deviation_envelope(const PosteriorField& field, double a, double marginal_floor) {
  const Grid& yg = field.y_grid;
  std::size_t lo = 0;
  std::size_t hi = yg.size() - 1;
  while (lo < hi && field.marginal[lo] <= marginal_floor) ++lo;
  while (hi > lo && field.marginal[hi] <= marginal_floor) --hi;
  if (hi <= lo) fail(ErrorCode::kMonotoneInversionFailure, "marginal is negligible on the whole y-grid");

  // Generalised inverse: the graph of psi^{-1} is the union of segments
  // (psi_k, y_k) -> (psi_{k+1}, y_{k+1}); a running max absorbs round-off dips.
  std::vector<double> p(hi - lo + 1);
  double run = -std::numeric_limits<double>::infinity();
  for (std::size_t k = lo; k <= hi; ++k) {
    const double v = field.cond_median[k];
    if (v < run - 1e-9) {
      fail(ErrorCode::kMonotoneInversionFailure,
           "conditional median decreases at y = " + std::to_string(yg.point(k)));
    }
    run = std::max(run, v);
    p[k - lo] = run;
  }

  DeviationEnvelope env;
  env.x_lo = p.front();
  env.x_hi = p.back();
  env.truncated = lo > 0 || hi + 1 < yg.size();
  const int i0 = static_cast<int>(std::floor(env.x_lo));
  const int i1 = static_cast<int>(std::floor(env.x_hi));
  env.cells.reserve(static_cast<std::size_t>(i1 - i0 + 1));
  for (int i = i0; i <= i1; ++i) env.cells.push_back({i, 0.0});

  auto dev = [a](double x, double y) { return std::abs(y - x / a); };
  auto touch = [&](double x, double y) {
    const int i = static_cast<int>(std::floor(x));
    auto& cell = env.cells[static_cast<std::size_t>(std::clamp(i, i0, i1) - i0)];
    cell.b = std::max(cell.b, dev(x, y));
  };
  for (std::size_t k = 0; k + 1 < p.size(); ++k) {
    const double x0 = p[k];
    const double x1 = p[k + 1];
    const double y0 = yg.point(lo + k);
    const double y1 = yg.point(lo + k + 1);
    touch(x0, y0);
    touch(x1, y1);
    // Deviation is convex along each segment, so only the cell boundaries it crosses matter.
    for (double b = std::floor(x0) + 1.0; b < x1; b += 1.0) {
      const double y = y0 + (y1 - y0) * (b - x0) / (x1 - x0);
      touch(b, y);
      // [i, i+1) is half open; the left cell reaches up to the boundary from below.
      auto& left = env.cells[static_cast<std::size_t>(static_cast<int>(b) - 1 - i0)];
      left.b = std::max(left.b, dev(b, y));
    }
  }
  for (const auto& c : env.cells) env.sum += c.b;
  return env;
}

double assumption_integral(const PosteriorField& field, double a, double eps) {
  const double r = std::sqrt(2.0 * a * std::max(eps, 0.0));
  std::vector<double> v(field.y_grid.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double y = field.y_grid.point(j);
    const double x = std::clamp(y, a * y - r, a * y + r);
    const double expo = 0.5 * (1.0 - a) * y * y - 0.5 * sq(x - y);
    v[j] = std::exp(expo) * std::abs(a * y - field.cond_median[j]);
  }
  return trapezoid(v, field.y_grid.step());
}

L1Certificate l1_certificate(const GriddedDensity& prior, int n_max, const L1Options& options) {
  if (n_max < 1 || n_max > 64) fail(ErrorCode::kInvalidArgument, "n_max must lie in [1, 64]");
  L1Certificate cert;
  const double a = prior.linearizing_slope();
  cert.a = a;
  cert.M = prior.max_density();

  const PosteriorField field = posterior_field(prior, options.y_grid);
  const Grid& yg = field.y_grid;
  std::vector<double> dev(yg.size());
  for (std::size_t j = 0; j < dev.size(); ++j) {
    dev[j] = std::abs(a * yg.point(j) - field.cond_median[j]);
    cert.sup_dev = std::max(cert.sup_dev, dev[j]);
  }
  cert.eps_l1 = trapezoid(dev, yg.step());
  cert.sup_dev_bound = std::sqrt(2.0 * a * cert.eps_l1);
  cert.sup_dev_pass = cert.sup_dev <= cert.sup_dev_bound + 1e-8;
  cert.B = assumption_integral(field, a, cert.eps_l1);
  cert.envelope = deviation_envelope(field, a);

  const GridFunction conv = convolution_form(a, prior.density());
  std::vector<double> abs_t;
  for (std::size_t j = 0; j < conv.size(); ++j) {
    const double y = conv.grid().point(j);
    if (y < yg.lo() || y > yg.hi()) continue;
    abs_t.push_back(std::abs(conv[j]));
  }
  if (abs_t.size() < 2) fail(ErrorCode::kInvalidArgument, "convolution form does not cover the y-grid");
  cert.weighted_T_l1 = trapezoid(abs_t, conv.grid().step());
  cert.weighted_T_edge = std::max(abs_t.front(), abs_t.back());

  cert.C0 = growth_estimate(tilted_scaled_density(a, prior.density()), 0.5);
  cert.chain_pass = cert.weighted_T_l1 <= 2.0 * cert.C0 * cert.envelope.sum + 1e-6;

  const double sigma2 = a / (1.0 - a);
  const GridFunction f = pad_for_basis(prior.density(), sigma2, n_max);
  const HermiteBasis basis = build_basis(a, n_max, f.grid());
  const CoefficientSet coeffs = hermite_coefficients(f, basis);

  cert.pass = cert.sup_dev_pass;
  const double eps_used = cert.envelope.sum;
  for (int n = 1; n <= n_max; ++n) {
    CoefficientBound cb;
    cb.n = n;
    cb.c_n = coeffs.values[static_cast<std::size_t>(n)];
    cb.phi_l1 = phi_fourier_l1_norm(n, a, options.omega_grid);
    cb.bound = cert.weighted_T_l1 * cb.phi_l1;
    cb.pass = std::abs(cb.c_n) <= cb.bound + 1e-9;
    cert.pass = cert.pass && cb.pass;
    cert.tail_energy += cb.c_n * cb.c_n;
    if (eps_used > 0.0) cert.corollary_sum += std::abs(cb.c_n) * cb.bound / eps_used;
    cert.per_n.push_back(cb);
  }
  return cert;
}

}  // namespace gstab
