#include "gauss_stab/numerics.hpp"

namespace gstab {

namespace {

constexpr double kSmall = 0.2;
constexpr double kLarge = 6.0;

// sum_k (-2 w^2)^k / (2k+1)!!, i.e. D(w)/w for small |w|.
double small_series_over_x(double w) {
  const double w2 = w * w;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    term *= -2.0 * w2 / (2.0 * k + 1.0);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

// exp(-w^2) * sum_k w^(2k+1) / (k! (2k+1)); every term positive, no cancellation.
double positive_series(double w) {
  const double w2 = w * w;
  double power = w;  // w^(2k+1)/k!
  double sum = w;
  for (int k = 1; k < 400; ++k) {
    power *= w2 / k;
    const double term = power / (2.0 * k + 1.0);
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return std::exp(-w2) * sum;
}

// 1/(2w) * sum_k (2k-1)!! / (2 w^2)^k, truncated at the smallest term.
double asymptotic_series(double w) {
  const double inv = 1.0 / (2.0 * w * w);
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double next = term * (2.0 * k - 1.0) * inv;
    if (next > term) break;
    term = next;
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum / (2.0 * w);
}

}  // namespace

double erf(double x) noexcept { return x < 0.0 ? -std::erf(-x) : std::erf(x); }

double dawson(double w) noexcept {
  const double a = std::abs(w);
  double v;
  if (a < kSmall) {
    v = a * small_series_over_x(a);
  } else if (a <= kLarge) {
    v = positive_series(a);
  } else {
    v = asymptotic_series(a);
  }
  return w < 0.0 ? -v : v;
}

double dawson_over_x(double w) noexcept {
  const double a = std::abs(w);
  if (a < kSmall) return small_series_over_x(a);
  return dawson(a) / a;
}

double normal_pdf(double x, double mean, double variance) noexcept {
  const double d = x - mean;
  return std::exp(-0.5 * d * d / variance) / std::sqrt(2.0 * kPi * variance);
}

double normal_cdf(double x, double mean, double variance) noexcept {
  return 0.5 * std::erfc(-(x - mean) / std::sqrt(2.0 * variance));
}

}  // namespace gstab
