#include <cmath>
#include <random>
#include <utility>
#include <variant>
#include <vector>

#include <gtest/gtest.h>

#include "gauss_stab/channel.hpp"
#include "gauss_stab/priors.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

namespace gstab {
namespace {

using testing::code_of;

GriddedDensity make(const PriorSpec& s) { return build_prior(s, default_x_grid()); }

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

TEST(PosteriorField, GaussianIsExactlyLinear) {
  for (double s2 : {0.5, 1.0, 4.0}) {
    const auto p = make({prior::Gaussian{s2}});
    const auto f = posterior_field(p, default_y_grid());
    const double a = s2 / (1.0 + s2);
    double dm = 0.0;
    double dpsi = 0.0;
    for (std::size_t j = 0; j < f.y_grid.size(); ++j) {
      const double y = f.y_grid.point(j);
      if (std::abs(y) > 6.0) continue;
      dm = std::max(dm, std::abs(f.cond_mean[j] - a * y));
      dpsi = std::max(dpsi, std::abs(f.cond_median[j] - a * y));
    }
    EXPECT_LT(dm, 1e-8) << s2;
    EXPECT_LT(dpsi, s2 == 1.0 ? 1e-8 : 1e-7) << s2;
  }
}

TEST(PosteriorField, SymmetricPriorHasZeroMedianAtOrigin) {
  const auto f = posterior_field(make({prior::TwoGaussianMixture{0.5, -2.0, 0.7, 2.0, 0.7}}), default_y_grid());
  ASSERT_EQ(f.y_grid.point(512), 0.0);
  EXPECT_NEAR(f.cond_median[512], 0.0, 1e-10);
}

TEST(PosteriorField, MarginalIntegratesToOne) {
  // Each y-range keeps the marginal above the underflow floor and the lost tail below 1e-9.
  const std::vector<std::pair<PriorSpec, double>> cases = {
      {{prior::Gaussian{1.0}}, 10.0},
      {{prior::Gaussian{4.0}}, 14.0},
      {{prior::GaussianBump{1.0, 0.5, 0.5, 0.05}}, 10.0},
      {{prior::TwoGaussianMixture{0.5, -3.0, 0.2, 3.0, 0.2}}, 11.0},
      {{prior::TwoGaussianMixture{0.5, -3.0, 1.0, 3.0, 1.0}}, 13.0},
      {{prior::Uniform{-1.0, 1.0}}, 8.0},
  };
  for (const auto& [s, reach] : cases) {
    const auto f = posterior_field(make(s), Grid(-reach, reach, 2049));
    EXPECT_NEAR(trapezoid_integrate(f.marginal), 1.0, 1e-8) << describe(s);
  }
}

TEST(PosteriorField, BumpMedianAgainstMonteCarlo) {
  const prior::GaussianBump b{1.0, 0.5, 0.5, 0.05};
  const auto f = posterior_field(make({b}), default_y_grid());
  const std::size_t j = 576;
  ASSERT_EQ(f.y_grid.point(j), 1.0);

  // Proposal: the posterior of the pure N(0, 1) part at y = 1, i.e. N(1/2, 1/2).
  // Acceptance (phi + bump) / phi is at most 1 + 0.05 / phi(1) < 1.25.
  std::mt19937_64 rng(99);
  std::normal_distribution<double> prop(0.5, std::sqrt(0.5));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> draws;
  draws.reserve(10'000'000);
  while (draws.size() < 10'000'000) {
    const double x = prop(rng);
    const double base = oracle::std_normal_pdf(x);
    const double ratio = oracle::bump_prior_raw(x, 1.0, 0.5, 0.5, 0.05) / base;
    if (u(rng) * 1.25 < ratio) draws.push_back(x);
  }
  const auto m = oracle::sample_median(std::move(draws));
  EXPECT_GE(f.cond_median[j], m.lo);
  EXPECT_LE(f.cond_median[j], m.hi);
}

TEST(PosteriorField, MedianBalancesPosteriorMass) {
  for (const auto& s : benchmark_priors()) {
    const auto p = make(s);
    const auto f = posterior_field(p, default_y_grid());
    for (std::size_t j = 0; j < f.y_grid.size(); j += 64) {
      EXPECT_NEAR(posterior_cdf(p, f.y_grid.point(j), f.cond_median[j]), 0.5, 1e-9) << describe(s);
    }
  }
}

double median_change(const PriorSpec& s, std::size_t from, std::size_t to) {
  const auto a = posterior_field(build_prior(s, default_x_grid().refined(from)), default_y_grid());
  const auto b = posterior_field(build_prior(s, default_x_grid().refined(to)), default_y_grid());
  double d = 0.0;
  for (std::size_t j = 0; j < a.y_grid.size(); ++j) d = std::max(d, std::abs(a.cond_median[j] - b.cond_median[j]));
  return d;
}

TEST(PosteriorField, RefinementChangesMedianLittle) {
  for (const auto& s : benchmark_priors()) {
    if (std::holds_alternative<prior::Uniform>(s.kind)) continue;
    EXPECT_LT(median_change(s, 1, 2), 1e-6) << describe(s);
  }
}

TEST(PosteriorField, UniformMedianConvergesAtSecondOrder) {
  // The density jumps, so the trapezoid sums are second order only; the default grid
  // moves psi by ~5e-6 when doubled. Check the rate, then the 1e-6 level on a finer grid.
  const PriorSpec s{prior::Uniform{-1.0, 1.0}};
  const double d1 = median_change(s, 1, 2);
  const double d2 = median_change(s, 2, 4);
  const double d3 = median_change(s, 4, 8);
  EXPECT_GT(d1 / d2, 2.5);
  EXPECT_GT(d2 / d3, 2.5);
  EXPECT_LT(d3, 1e-6);
}

TEST(PosteriorField, MarginalUnderflow) {
  const auto p = make({prior::Uniform{-1.0, 1.0}});
  EXPECT_EQ(code_of([&] { posterior_field(p, Grid(-60.0, 60.0, 121)); }), ErrorCode::kMarginalUnderflow);
}

TEST(Monotonicity, GaussianIncrementIsHalfStep) {
  const auto f = posterior_field(make({prior::Gaussian{1.0}}), default_y_grid());
  const auto r = monotonicity_audit(f);
  EXPECT_EQ(r.median.violations, 0u);
  EXPECT_EQ(r.mean.violations, 0u);
  EXPECT_NEAR(r.median.min_increment, 0.5 * f.y_grid.step(), 1e-8);
}

TEST(Monotonicity, SteepMixtureAgreesWithRefinedGrid) {
  const PriorSpec s{prior::TwoGaussianMixture{0.5, -3.0, 0.2, 3.0, 0.2}};
  const auto f = posterior_field(make(s), default_y_grid());
  const auto fine = posterior_field(build_prior(s, default_x_grid().refined(4)), default_y_grid().refined(4));
  EXPECT_EQ(monotonicity_audit(f).median.violations, 0u);
  EXPECT_EQ(monotonicity_audit(fine).median.violations, 0u);
  double d = 0.0;
  for (std::size_t j = 0; j < f.y_grid.size(); ++j) d = std::max(d, std::abs(f.cond_median[j] - fine.cond_median[4 * j]));
  EXPECT_LT(d, 1e-6);
}

TEST(Monotonicity, AllBenchmarkPriors) {
  for (const auto& s : benchmark_priors()) {
    const auto r = monotonicity_audit(posterior_field(make(s), default_y_grid()));
    EXPECT_EQ(r.median.violations, 0u) << describe(s);
    EXPECT_EQ(r.mean.violations, 0u) << describe(s);
  }
}

TEST(Orthogonality, ConstantTestFunction) {
  const GridFunction one = GridFunction::sample(default_y_grid(), [](double) { return 1.0; });
  const auto pg = make({prior::Gaussian{1.0}});
  EXPECT_NEAR(orthogonality_residual_l2(pg, posterior_field(pg, default_y_grid()), one), 0.0, 1e-8);
  for (const auto& s : benchmark_priors()) {
    const auto p = make(s);
    EXPECT_NEAR(orthogonality_residual_l1(p, posterior_field(p, default_y_grid()), one), 0.0, 1e-8) << describe(s);
  }
}

TEST(Orthogonality, CubicOnBumpPrior) {
  const auto p = make({prior::GaussianBump{1.0, 0.5, 0.5, 0.05}});
  const auto f = posterior_field(p, default_y_grid());
  const auto g = GridFunction::sample(f.y_grid, [](double y) { return std::abs(y) <= 4.0 ? y * y * y : 0.0; });
  EXPECT_LT(std::abs(orthogonality_residual_l2(p, f, g)), 1e-7 * l2_norm(g));
}

TEST(Orthogonality, GaussianWeightOnGaussianPrior) {
  const auto p = make({prior::Gaussian{1.0}});
  const auto f = posterior_field(p, default_y_grid());
  const auto g = GridFunction::sample(f.y_grid, [](double y) { return std::exp(-0.25 * y * y); });
  EXPECT_NEAR(orthogonality_residual_l1(p, f, g), 0.0, 1e-8);
}

TEST(Orthogonality, SeededSmoothBumps) {
  std::mt19937_64 rng(20240607);
  for (const auto& s : {PriorSpec{prior::GaussianBump{1.0, 0.5, 0.5, 0.05}},
                        PriorSpec{prior::TwoGaussianMixture{0.5, -3.0, 1.0, 3.0, 1.0}}}) {
    const auto p = make(s);
    const auto f = posterior_field(p, default_y_grid());
    for (int trial = 0; trial < 20; ++trial) {
      const auto b = testing::random_bump(rng, 5.0);
      const auto g = GridFunction::sample(f.y_grid, b);
      EXPECT_LT(std::abs(orthogonality_residual_l2(p, f, g)), 1e-7 * l2_norm(g)) << describe(s);
      EXPECT_LT(std::abs(orthogonality_residual_l1(p, f, g)), 1e-6 * l1_norm(g)) << describe(s);
    }
  }
}

TEST(Orthogonality, ShiftedBumpOnMixtureStableUnderRefinement) {
  const PriorSpec s{prior::TwoGaussianMixture{0.5, -3.0, 0.2, 3.0, 0.2}};
  const testing::Bump b{1.5, 1.0, 1.0};
  const auto p = make(s);
  const auto f = posterior_field(p, default_y_grid());
  const auto g = GridFunction::sample(f.y_grid, b);
  const double r = orthogonality_residual_l1(p, f, g);
  EXPECT_LT(std::abs(r), 1e-6 * l1_norm(g));

  const auto pf = build_prior(s, default_x_grid().refined(2));
  const auto ff = posterior_field(pf, default_y_grid().refined(2));
  const auto gf = GridFunction::sample(ff.y_grid, b);
  EXPECT_LT(std::abs(orthogonality_residual_l1(pf, ff, gf)), 1e-6 * l1_norm(gf));
}

}  // namespace
}  // namespace gstab
