#include <algorithm>
#include <cmath>

#include "gauss_stab/hermite.hpp"

namespace gstab {

namespace {

constexpr double kEdgeTol = 1e-10;
constexpr int kRecheckOrder = 64;

void check_args(double a, int max_order) {
  if (!(a > 0.0 && a < 1.0)) fail(ErrorCode::kInvalidArgument, "slope a must lie in (0, 1)");
  if (max_order < 0) fail(ErrorCode::kInvalidArgument, "max_order must be non-negative");
  if (max_order > HermiteBasis::kMaxOrder) {
    fail(ErrorCode::kOrderOverflow,
         "max_order " + std::to_string(max_order) + " exceeds " + std::to_string(HermiteBasis::kMaxOrder));
  }
}

// Orthonormal Hermite functions psi_0..psi_N at u, by the normalised recurrence
// psi_{n+1} = sqrt(2/(n+1)) u psi_n - sqrt(n/(n+1)) psi_{n-1}.
// Values below the double range start at 0 and grow through the recurrence, so
// far tails are seeded in log space.
void psi_row(double u, int max_order, std::vector<double>& out) {
  out.assign(static_cast<std::size_t>(max_order) + 1, 0.0);
  const double log_p0 = -0.25 * std::log(kPi) - 0.5 * u * u;
  // Rescale by exp(shift) so the seed stays representable; undo per entry.
  const double shift = log_p0 < -600.0 ? -log_p0 - 600.0 : 0.0;
  double prev = 0.0;
  double cur = std::exp(log_p0 + shift);
  double scale_log = shift;
  out[0] = cur * std::exp(-scale_log);
  for (int n = 0; n < max_order; ++n) {
    const double next = std::sqrt(2.0 / (n + 1.0)) * u * cur - std::sqrt(n / (n + 1.0)) * prev;
    prev = cur;
    cur = next;
    if (std::abs(cur) > 1e200) {
      prev *= 1e-200;
      cur *= 1e-200;
      scale_log -= 200.0 * std::log(10.0);
    }
    out[static_cast<std::size_t>(n) + 1] = cur * std::exp(-scale_log);
  }
}

double cubic_interpolate(std::span<const double> v, std::span<const double> d, const Grid& g, double x) {
  const std::size_t k = g.cell_of(x);
  const double h = g.step();
  const double t = (x - g.point(k)) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * v[k] + (t3 - 2 * t2 + t) * h * d[k] + (-2 * t3 + 3 * t2) * v[k + 1] +
         (t3 - t2) * h * d[k + 1];
}

}  // namespace

double hermite_log_normalizer(int n, double sigma2) {
  const double log_sigma = 0.5 * std::log(sigma2);
  return 0.25 * std::log(kPi) + 0.5 * n * std::log(2.0) + 0.5 * std::lgamma(n + 1.0) -
         (n - 0.5) * log_sigma;
}

double hermite_function(int n, double sigma2, double x) {
  if (n < 0) fail(ErrorCode::kInvalidArgument, "Hermite order must be non-negative");
  const double sigma = std::sqrt(sigma2);
  std::vector<double> row;
  psi_row(x / sigma, n, row);
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  return sign * row.back() / std::sqrt(sigma);
}

HermiteBasis::HermiteBasis(double a, int max_order, const Grid& grid)
    : a_(a), sigma2_(a / (1.0 - a)), max_order_(max_order) {
  check_args(a, max_order);
  const double sigma = std::sqrt(sigma2_);
  const double inv_sqrt_sigma = 1.0 / std::sqrt(sigma);
  const std::size_t count = static_cast<std::size_t>(max_order) + 1;

  std::vector<std::vector<double>> cols(count, std::vector<double>(grid.size()));
  std::vector<double> row;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    psi_row(grid.point(k) / sigma, max_order, row);
    for (std::size_t n = 0; n < count; ++n) {
      cols[n][k] = ((n % 2 == 0) ? 1.0 : -1.0) * row[n] * inv_sqrt_sigma;
    }
  }

  functions_.reserve(count);
  log_normalizers_.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    const double edge = std::max(std::abs(cols[n].front()), std::abs(cols[n].back()));
    if (edge > kEdgeTol) {
      fail(ErrorCode::kEdgeLeakage, "H_" + std::to_string(n) + " is " + std::to_string(edge) +
                                        " at the edge of " + describe(grid));
    }
    functions_.emplace_back(grid, std::move(cols[n]));
    log_normalizers_.push_back(hermite_log_normalizer(static_cast<int>(n), sigma2_));
  }
}

HermiteBasis build_basis(double a, int max_order, const Grid& grid) {
  return HermiteBasis(a, max_order, grid);
}

std::vector<std::vector<double>> gram_matrix(const HermiteBasis& basis) {
  const std::size_t count = basis.functions().size();
  std::vector<std::vector<double>> g(count, std::vector<double>(count));
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = i; j < count; ++j) {
      g[i][j] = g[j][i] = inner_product(basis.functions()[i], basis.functions()[j]);
    }
  }
  return g;
}

double gram_deviation(const HermiteBasis& basis) {
  const auto g = gram_matrix(basis);
  double dev = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = 0; j < g.size(); ++j) {
      dev = std::max(dev, std::abs(g[i][j] - (i == j ? 1.0 : 0.0)));
    }
  }
  return dev;
}

CoefficientSet hermite_coefficients(const GridFunction& f, const HermiteBasis& basis) {
  if (!(f.grid() == basis.grid())) {
    fail(ErrorCode::kInvalidArgument, "function and basis live on different grids");
  }
  CoefficientSet out;
  out.values.reserve(basis.functions().size());
  for (const auto& h : basis.functions()) out.values.push_back(inner_product(f, h));
  if (basis.max_order() <= kRecheckOrder) return out;

  out.high_order = true;
  const Grid fine = basis.grid().refined(2);
  const auto slopes = finite_difference(f.values(), f.grid().step());
  const auto f_fine = GridFunction::sample(
      fine, [&](double x) { return cubic_interpolate(f.values(), slopes, f.grid(), x); });
  const HermiteBasis fine_basis(basis.a(), basis.max_order(), fine);
  for (std::size_t n = 0; n < out.values.size(); ++n) {
    const double c = inner_product(f_fine, fine_basis.functions()[n]);
    out.refinement_delta = std::max(out.refinement_delta, std::abs(c - out.values[n]));
  }
  return out;
}

GridFunction pad_for_basis(const GridFunction& f, double sigma2, int n_max) {
  const Grid& g = f.grid();
  const double need = (std::sqrt(2.0 * n_max + 1.0) + 8.0) * std::sqrt(sigma2);
  const double half = std::max(g.hi(), -g.lo());
  if (need <= half && g.lo() == -g.hi()) return f;
  const double h = g.step();
  const auto extra = static_cast<std::size_t>(std::ceil(std::max(0.0, need - half) / h));
  const std::size_t left = extra + static_cast<std::size_t>(std::llround((half + g.lo()) / h));
  const std::size_t right = extra + static_cast<std::size_t>(std::llround((half - g.hi()) / h));
  std::vector<double> v(left + g.size() + right, 0.0);
  std::copy(f.values().begin(), f.values().end(), v.begin() + static_cast<std::ptrdiff_t>(left));
  const double new_lo = g.lo() - static_cast<double>(left) * h;
  const double new_hi = g.hi() + static_cast<double>(right) * h;
  const Grid wide(new_lo, new_hi, v.size());
  return GridFunction(wide, std::move(v));
}

}  // namespace gstab
