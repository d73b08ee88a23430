#include <algorithm>
#include <cmath>
#include <random>
#include <utility>

#include <fmt/core.h>

#include "cli/checks.hpp"
#include "cli/config.hpp"
#include "criteria.hpp"
#include "gauss_stab/channel.hpp"
#include "gauss_stab/hermite.hpp"
#include "gauss_stab/stability.hpp"

namespace gstab::acceptance {

namespace {

constexpr double kMeanLinearityTol = 1e-8;
constexpr double kMedianLinearityTol = 1e-7;
constexpr double kLinearityReach = 6.0;
constexpr double kL2OrthTol = 1e-7;   // relative to ||g||_2
constexpr double kL1OrthTol = 1e-6;   // relative to ||g||_1
constexpr int kTestFunctions = 20;
constexpr double kFourierTol = 1e-6;  // relative to 1 + |lhs|
constexpr int kSpectralBumps = 10;
constexpr double kGramTol = 1e-8;
constexpr double kParsevalFloor = 0.999;

GriddedDensity make(const PriorSpec& s) { return build_prior(s, default_x_grid()); }

}  // namespace

std::vector<PriorSpec> benchmark_priors() {
  return {
      {prior::Gaussian{1.0}},
      {prior::Gaussian{4.0}},
      {prior::GaussianBump{1.0, 0.5, 0.5, 0.05}},
      {prior::TwoGaussianMixture{0.5, -3.0, 0.2, 3.0, 0.2}},
      {prior::TwoGaussianMixture{0.5, -3.0, 1.0, 3.0, 1.0}},
      {prior::Uniform{-1.0, 1.0}},
  };
}

Outcome exact_linearity() {
  double dm = 0.0;
  double dpsi = 0.0;
  for (double s2 : {0.5, 1.0, 4.0}) {
    const auto f = posterior_field(make({prior::Gaussian{s2}}), default_y_grid());
    const double a = s2 / (1.0 + s2);
    for (std::size_t j = 0; j < f.y_grid.size(); ++j) {
      const double y = f.y_grid.point(j);
      if (std::abs(y) > kLinearityReach) continue;
      dm = std::max(dm, std::abs(f.cond_mean[j] - a * y));
      dpsi = std::max(dpsi, std::abs(f.cond_median[j] - a * y));
    }
  }
  return {dm < kMeanLinearityTol && dpsi < kMedianLinearityTol,
          fmt::format("sup|mean - ay| = {:.2e}, sup|psi - ay| = {:.2e}", dm, dpsi)};
}

Outcome median_monotonicity() {
  std::size_t violations = 0;
  double worst = INFINITY;
  for (const auto& s : benchmark_priors()) {
    const auto r = monotonicity_audit(posterior_field(make(s), default_y_grid()));
    violations += r.median.violations;
    worst = std::min(worst, r.median.min_increment);
  }
  return {violations == 0, fmt::format("{} violations, smallest increment {:.3e}", violations, worst)};
}

Outcome orthogonality_residuals() {
  std::mt19937_64 rng(cli::kDefaultSeed);
  double worst_l2 = 0.0;
  double worst_l1 = 0.0;
  for (const auto& s : benchmark_priors()) {
    const auto p = make(s);
    const auto f = posterior_field(p, default_y_grid());
    for (int k = 0; k < kTestFunctions; ++k) {
      const auto g = cli::sample_bumps(f.y_grid, cli::random_bumps(rng, 1, 5.0));
      worst_l2 = std::max(worst_l2, std::abs(orthogonality_residual_l2(p, f, g)) / l2_norm(g));
      worst_l1 = std::max(worst_l1, std::abs(orthogonality_residual_l1(p, f, g)) / l1_norm(g));
    }
  }
  return {worst_l2 < kL2OrthTol && worst_l1 < kL1OrthTol,
          fmt::format("max L2 residual/||g||_2 = {:.2e}, max L1 residual/||g||_1 = {:.2e}", worst_l2, worst_l1)};
}

Outcome fourier_identity() {
  const Grid tg = default_t_grid();
  std::mt19937_64 rng(cli::kDefaultSeed);
  double worst = 0.0;
  int checks = 0;
  // Each y-range keeps the marginal above the underflow floor.
  const std::pair<PriorSpec, double> cases[] = {
      {{prior::GaussianBump{1.0, 0.5, 0.5, 0.05}}, 10.0},
      {{prior::TwoGaussianMixture{0.5, -3.0, 1.0, 3.0, 1.0}}, 12.0},
      {{prior::Uniform{-1.0, 1.0}}, 8.0},
  };
  for (const auto& [s, reach] : cases) {
    const auto p = make(s);
    const auto f = posterior_field(p, Grid(-reach, reach, static_cast<std::size_t>(128 * reach) + 1));
    const double s2 = p.variance();
    auto record = [&](const ComplexGridFunction& gh) {
      const auto r = fourier_orthogonality_check(p, f, gh);
      worst = std::max(worst, r.gap / (1.0 + r.lhs));
      ++checks;
    };
    for (double tau : {0.5, 1.0, 2.0}) {
      record(ComplexGridFunction::sample(tg, [&](double t) {
        return (t >= 0.0 && t <= tau) ? std::exp(0.5 * (s2 + 1.0) * t * t - 0.5 * s2 * tau * tau) : 0.0;
      }));
    }
    for (int k = 0; k < kSpectralBumps; ++k) {
      const auto b = cli::sample_bumps(tg, cli::random_bumps(rng, 1, 3.0));
      record(ComplexGridFunction(tg, std::vector<Complex>(b.values().begin(), b.values().end())));
    }
  }
  return {worst < kFourierTol, fmt::format("{} spectra, max gap/(1+|lhs|) = {:.2e}", checks, worst)};
}

Outcome hermite_system() {
  double gram = 0.0;
  for (double a : {0.3, 0.5, 0.8}) {
    const double half = (std::sqrt(41.0) + 8.0) * std::sqrt(a / (1.0 - a));
    const Grid g(-half, half, 2 * static_cast<std::size_t>(std::ceil(256.0 * half)) + 1);
    gram = std::max(gram, gram_deviation(build_basis(a, 20, g)));
  }
  const auto p = make({prior::GaussianBump{1.0, 0.5, 0.5, 0.05}});
  const auto f = pad_for_basis(p.density(), 1.0, 64);
  const auto c = hermite_coefficients(f, build_basis(p.linearizing_slope(), 64, f.grid()));
  double energy = 0.0;
  for (double v : c.values) energy += v * v;
  const double ratio = energy / inner_product(f, f);
  return {gram < kGramTol && ratio >= kParsevalFloor,
          fmt::format("gram deviation {:.2e} (N = 20), parseval ratio {:.6f} (N = 64)", gram, ratio)};
}

}  // namespace gstab::acceptance
