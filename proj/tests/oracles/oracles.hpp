#pragma once

// Reference computations for the tests. Nothing here calls the library's
// quadrature, special functions or solvers.

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

/// Adaptive Gauss-Kronrod (61 point) over [lo, hi].
double integrate(const std::function<double(double)>& fn, double lo, double hi, double tol = 1e-13);

/// Adaptive Gauss-Kronrod over [lo, hi] split into `pieces` equal panels.
double integrate_panels(const std::function<double(double)>& fn, double lo, double hi, int pieces,
                        double tol = 1e-13);

double std_normal_pdf(double x);
double std_normal_cdf(double x);

/// Unnormalised N(0, v) + compact bump density, written out independently.
double bump_prior_raw(double x, double variance, double center, double width, double height);

/// Definition-built Hermite function: the n-th derivative of exp(-x^2/s2) is expanded as
/// P_n(x) exp(-x^2/s2) with P_{n+1} = P_n' - (2x/s2) P_n, then scaled by exp(x^2/(2 s2)) / K_n.
double hermite_by_definition(int n, double sigma2, double x);

/// |F[sign(x) exp(-a x^2/2)](w)| = 2 int_0^inf sin(2 pi w x) exp(-a x^2/2) dx by direct quadrature.
double denominator_by_quadrature(double a, double omega);

/// Sampler inverting a CDF tabulated by Gauss-Kronrod on a fine grid.
class InverseCdfSampler {
 public:
  InverseCdfSampler(const std::function<double(double)>& density, double lo, double hi, int cells);
  double operator()(std::mt19937_64& rng) const;

 private:
  std::vector<double> x_;
  std::vector<double> cdf_;
};

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

MeanEstimate sample_mean(const std::vector<double>& values);

/// Empirical median with a distribution-free 3-sigma band taken from order statistics.
struct MedianEstimate {
  double median = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};
MedianEstimate sample_median(std::vector<double> values);

/// E[X | Y = y] for a two-Gaussian mixture prior and unit Gaussian noise, in closed form.
double mixture_posterior_mean(double w, double m1, double v1, double m2, double v2, double y);

/// Lévy distance of two CDFs known pointwise: smallest h on the grid h = h_start + k * h_step
/// with G(x - h) - h <= F(x) <= G(x + h) + h at every x in xs.
double levy_dense_scan(const std::function<double(double)>& F, const std::function<double(double)>& G,
                       const std::vector<double>& xs, double h_step, double h_max = 1.0, double h_start = 0.0);

/// min over log-spaced delta in [1e-6, 1e3] of
///   2 (1 + s2)/pi eps^{delta/(2(1+delta))} + 24 / (pi sqrt(2 pi s2/(1+delta) log(1/eps))).
double l2_bound_dense_scan(double epsilon, double sigma2, int points = 10000);

}  // namespace oracle
