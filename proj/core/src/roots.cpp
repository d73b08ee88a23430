#include <algorithm>
#include <array>

#include "gauss_stab/numerics.hpp"

namespace gstab {

double bisect_root(const std::function<double(double)>& fn, double lo, double hi, double tol) {
  if (!(tol > 0.0)) fail(ErrorCode::kInvalidArgument, "bisection tolerance must be positive");
  if (lo > hi) std::swap(lo, hi);
  double flo = fn(lo);
  const double fhi = fn(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0 || std::isnan(flo) || std::isnan(fhi)) {
    fail(ErrorCode::kNoBracket, "function has the same sign at both ends of [" + std::to_string(lo) +
                                    ", " + std::to_string(hi) + "]");
  }
  for (int it = 0; it < 400 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fmid = fn(mid);
    if (fmid == 0.0) return mid;
    if ((fmid < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

MinimizeResult golden_minimize(const std::function<double(double)>& fn, double lo, double hi,
                               double tol) {
  if (!(lo < hi)) fail(ErrorCode::kInvalidArgument, "golden_minimize requires lo < hi");
  if (!(tol > 0.0)) fail(ErrorCode::kInvalidArgument, "golden_minimize tolerance must be positive");

  constexpr std::size_t kSeeds = 64;
  std::array<double, kSeeds> xs{};
  std::array<double, kSeeds> fs{};
  std::size_t best = 0;
  for (std::size_t i = 0; i < kSeeds; ++i) {
    xs[i] = i + 1 == kSeeds ? hi : lo + (hi - lo) * static_cast<double>(i) / (kSeeds - 1);
    fs[i] = fn(xs[i]);
    if (fs[i] < fs[best]) best = i;
  }

  double a = xs[best == 0 ? 0 : best - 1];
  double b = xs[std::min(best + 1, kSeeds - 1)];
  constexpr double kInvPhi = 0.6180339887498949;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = fn(c);
  double fd = fn(d);
  for (int it = 0; it < 500 && b - a > tol; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = fn(d);
    }
  }
  MinimizeResult result{xs[best], fs[best]};
  for (double x : {c, d, 0.5 * (a + b)}) {
    const double v = fn(x);
    if (v < result.min) result = {x, v};
  }
  return result;
}

}  // namespace gstab
