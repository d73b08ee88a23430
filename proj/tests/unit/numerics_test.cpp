#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "gauss_stab/numerics.hpp"
#include "oracles.hpp"

namespace gstab {
namespace {

TEST(Trapezoid, ConstantAndAffineAreExact) {
  const Grid g(0.0, 1.0, 101);
  EXPECT_NEAR(trapezoid_integrate(GridFunction::sample(g, [](double) { return 1.0; })), 1.0, 1e-15);
  EXPECT_NEAR(trapezoid_integrate(GridFunction::sample(g, [](double x) { return x; })), 0.5, 1e-15);
}

TEST(Trapezoid, StandardNormalMass) {
  const Grid g(-10.0, 10.0, 4001);
  const auto f = GridFunction::sample(g, [](double x) { return normal_pdf(x, 0.0, 1.0); });
  EXPECT_NEAR(trapezoid_integrate(f), erf(10.0 / std::sqrt(2.0)), 1e-10);
}

TEST(Trapezoid, Linear) {
  const Grid g(-3.0, 2.0, 777);
  const auto f = GridFunction::sample(g, [](double x) { return std::sin(3.0 * x) + x * x; });
  const auto h = GridFunction::sample(g, [](double x) { return std::exp(-x * x); });
  const double alpha = 1.7;
  const double beta = -0.3;
  const auto mix = GridFunction::sample(g, [&](double x) {
    return alpha * (std::sin(3.0 * x) + x * x) + beta * std::exp(-x * x);
  });
  EXPECT_NEAR(trapezoid_integrate(mix), alpha * trapezoid_integrate(f) + beta * trapezoid_integrate(h), 1e-13);
}

TEST(CubicAntiderivative, PartialIntegralsOfSmoothFunction) {
  const Grid g(-6.0, 6.0, 601);
  const CubicAntiderivative C(GridFunction::sample(g, [](double x) { return std::exp(-0.5 * x * x); }));
  for (double b : {-1.234, 0.0, 0.5017, 2.71}) {
    const double ref = oracle::integrate([](double x) { return std::exp(-0.5 * x * x); }, -6.0, b);
    EXPECT_NEAR(C(b), ref, 1e-8) << "b = " << b;
  }
}

TEST(FftConvolve, GaussianSelfConvolution) {
  const Grid g(-12.0, 12.0, 4096);
  const auto f = GridFunction::sample(g, [](double x) { return normal_pdf(x, 0.0, 1.0); });
  const auto h = fft_convolve(f, f, EdgePolicy::kUnchecked);
  double err = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) err = std::max(err, std::abs(h[k] - normal_pdf(g.point(k), 0.0, 2.0)));
  EXPECT_LT(err, 1e-8);
}

TEST(FftConvolve, SpikeShiftsKernel) {
  const Grid g(-8.0, 8.0, 1601);
  const std::size_t mid = 800;  // x = 0
  std::vector<double> spike(g.size(), 0.0);
  spike[mid] = 1.0 / g.step();
  auto gfun = [](double x) { return std::exp(-(x - 0.3) * (x - 0.3)) * (1.0 + 0.2 * std::sin(x)); };
  const auto h = fft_convolve(GridFunction(g, spike), GridFunction::sample(g, gfun), EdgePolicy::kUnchecked);
  double err = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) err = std::max(err, std::abs(h[k] - gfun(g.point(k))));
  EXPECT_LT(err, g.step() * 1.5);  // max |g'| < 1.5
}

TEST(FftConvolve, NormalAgainstIndicator) {
  const Grid g(-12.0, 12.0, 6001);
  const auto f = GridFunction::sample(g, [](double x) { return normal_pdf(x, 0.0, 1.0); });
  // Half weight at the jump so the trapezoid sum sees the midpoint value.
  const auto ind = GridFunction::sample(g, [](double x) {
    const double d = std::abs(x) - 0.5;
    return std::abs(d) < 1e-9 ? 0.5 : (d < 0.0 ? 1.0 : 0.0);
  });
  const auto h = fft_convolve(f, ind, EdgePolicy::kUnchecked);
  double err = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double x = g.point(k);
    err = std::max(err, std::abs(h[k] - (oracle::std_normal_cdf(x + 0.5) - oracle::std_normal_cdf(x - 0.5))));
  }
  EXPECT_LT(err, 1e-6);
}

TEST(FftConvolve, MatchesDirectSum) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  for (std::size_t n : {65u, 257u, 511u}) {  // odd sizes put every lag on a node
    const Grid g(-3.0, 3.0, n);
    std::vector<double> a(n);
    std::vector<double> b(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double w = std::exp(-g.point(k) * g.point(k));  // keep the ends quiet
      a[k] = w * nd(rng);
      b[k] = w * nd(rng);
    }
    const auto h = fft_convolve(GridFunction(g, a), GridFunction(g, b), EdgePolicy::kUnchecked);
    const auto zero = static_cast<long>(std::lround(-g.lo() / g.step()));
    double err = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const long m = static_cast<long>(j) - static_cast<long>(k) + zero;  // index of x_j - x_k
        if (m >= 0 && m < static_cast<long>(n)) acc += a[k] * b[static_cast<std::size_t>(m)];
      }
      err = std::max(err, std::abs(h[j] - g.step() * acc));
    }
    EXPECT_LT(err, 1e-10) << "n = " << n;
  }
}

TEST(ToeplitzConvolve, MatchesDirectSum) {
  const std::vector<double> f{1.0, -2.0, 0.5, 3.0};
  std::vector<double> lags(7);
  for (int m = -3; m <= 3; ++m) lags[static_cast<std::size_t>(m + 3)] = 0.1 * m * m - m;
  const auto h = toeplitz_convolve(f, lags, 0.25);
  for (int j = 0; j < 4; ++j) {
    double acc = 0.0;
    for (int k = 0; k < 4; ++k) acc += f[static_cast<std::size_t>(k)] * lags[static_cast<std::size_t>(j - k + 3)];
    EXPECT_NEAR(h[static_cast<std::size_t>(j)], 0.25 * acc, 1e-13);
  }
}

TEST(Bisect, SimpleRoots) {
  EXPECT_NEAR(bisect_root([](double x) { return x - 0.3; }, 0.0, 1.0, 1e-12), 0.3, 1e-12);
  EXPECT_NEAR(bisect_root([](double x) { return normal_cdf(x, 0.0, 1.0) - 0.5; }, -5.0, 5.0, 1e-10), 0.0, 1e-10);
}

TEST(Bisect, RequiresBracket) {
  try {
    bisect_root([](double x) { return x * x + 1.0; }, -1.0, 1.0, 1e-10);
    FAIL() << "expected NoBracket";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoBracket);
  }
}

TEST(GoldenMinimize, InteriorAndBoundary) {
  const auto r = golden_minimize([](double x) { return (x - 2.0) * (x - 2.0); }, 0.0, 5.0, 1e-9);
  EXPECT_NEAR(r.argmin, 2.0, 1e-8);
  const auto b = golden_minimize([](double x) { return x; }, 1.0, 3.0, 1e-9);
  EXPECT_NEAR(b.argmin, 1.0, 1e-8);
  EXPECT_NEAR(b.min, 1.0, 1e-8);
}

TEST(GoldenMinimize, BoundObjectiveAgainstDeltaScan) {
  const double eps = 1e-4;
  auto obj = [&](double d) {
    const double pi = 3.141592653589793;
    return 4.0 / pi * std::pow(eps, d / (2.0 * (1.0 + d))) +
           24.0 / (pi * std::sqrt(2.0 * pi / (1.0 + d) * std::log(1.0 / eps)));
  };
  const auto r = golden_minimize([&](double ld) { return obj(std::exp(ld)); }, std::log(1e-6), std::log(1e3), 1e-12);
  double scan = 1e300;
  for (int k = 1; k <= 1000000; ++k) scan = std::min(scan, obj(1e-3 * k));
  EXPECT_NEAR(r.min, scan, 1e-6);
}

TEST(Special, OddAndZero) {
  EXPECT_EQ(erf(0.0), 0.0);
  EXPECT_EQ(dawson(0.0), 0.0);
  for (double x : {1e-8, 0.05, 0.3, 1.7, 4.0, 9.5, 30.0}) {
    EXPECT_EQ(erf(-x), -erf(x));
    EXPECT_EQ(dawson(-x), -dawson(x));
  }
}

TEST(Special, ErfAgainstLibm) {
  for (double x = -6.0; x <= 6.0; x += 0.0137) EXPECT_NEAR(erf(x), std::erf(x), 1e-14) << x;
}

TEST(Special, DawsonTaylor) {
  for (double w = -1e-3; w <= 1e-3; w += 1.7e-5) EXPECT_NEAR(dawson(w), w - 2.0 / 3.0 * w * w * w, 1e-12) << w;
}

TEST(Special, DawsonAgainstQuadrature) {
  for (double w : {0.05, 0.2, 0.9, 1.5, 3.0, 5.5}) {
    const double ref = oracle::integrate([w](double t) { return std::exp(t * t - w * w); }, 0.0, w, 1e-15);
    EXPECT_NEAR(dawson(w), ref, 1e-12 * std::max(1.0, ref)) << w;
  }
}

TEST(Special, DawsonTwoSidedBounds) {
  for (double w = 0.01; w <= 20.0; w += 0.01) {
    const double up = (1.0 - std::exp(-w * w)) / w;
    EXPECT_GE(dawson(w), 0.5 * up) << w;
    EXPECT_LE(dawson(w), up) << w;
  }
}

TEST(Special, DawsonOde) {
  const double h = 1e-4;
  for (double w = -10.0; w <= 10.0; w += 0.05) {
    // Five-point stencil: the two-point one alone carries ~4e-9 truncation error here.
    const double d1 = (dawson(w - 2 * h) - 8.0 * dawson(w - h) + 8.0 * dawson(w + h) - dawson(w + 2 * h)) / (12.0 * h);
    EXPECT_LT(std::abs(d1 + 2.0 * w * dawson(w) - 1.0), 1e-9) << w;
  }
}

TEST(GridFunctionTest, RejectsMismatchAndNonFinite) {
  const Grid g(0.0, 1.0, 3);
  EXPECT_THROW(GridFunction(g, {1.0, 2.0}), Error);
  EXPECT_THROW(GridFunction(g, {1.0, NAN, 2.0}), Error);
  EXPECT_THROW(Grid(0.0, 1.0, 1), Error);
}

}  // namespace
}  // namespace gstab
