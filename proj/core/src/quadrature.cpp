#include <algorithm>

#include "gauss_stab/numerics.hpp"

namespace gstab {

namespace {

template <typename T>
T trapezoid_impl(std::span<const T> v, double step) {
  if (v.size() < 2) return T{};
  T acc{};
  for (std::size_t k = 1; k + 1 < v.size(); ++k) acc += v[k];
  acc += 0.5 * (v.front() + v.back());
  return acc * step;
}

void require_same_grid(const GridFunction& f, const GridFunction& g) {
  if (!(f.grid() == g.grid())) fail(ErrorCode::kInvalidArgument, "functions live on different grids");
}

}  // namespace

double trapezoid(std::span<const double> values, double step) { return trapezoid_impl(values, step); }
Complex trapezoid(std::span<const Complex> values, double step) { return trapezoid_impl(values, step); }

double trapezoid_integrate(const GridFunction& f) { return trapezoid(f.values(), f.grid().step()); }
Complex trapezoid_integrate(const ComplexGridFunction& f) {
  return trapezoid(f.values(), f.grid().step());
}

std::vector<double> cumulative_trapezoid(std::span<const double> values, double step) {
  std::vector<double> c(values.size(), 0.0);
  for (std::size_t k = 1; k < values.size(); ++k) {
    c[k] = c[k - 1] + 0.5 * step * (values[k - 1] + values[k]);
  }
  return c;
}

double inner_product(const GridFunction& f, const GridFunction& g) {
  require_same_grid(f, g);
  std::vector<double> p(f.size());
  for (std::size_t k = 0; k < p.size(); ++k) p[k] = f[k] * g[k];
  return trapezoid(p, f.grid().step());
}

double l2_norm(const GridFunction& f) { return std::sqrt(inner_product(f, f)); }

double l1_norm(const GridFunction& f) {
  std::vector<double> p(f.size());
  for (std::size_t k = 0; k < p.size(); ++k) p[k] = std::abs(f[k]);
  return trapezoid(p, f.grid().step());
}

double simpson_integrate(const std::function<double(double)>& fn, double lo, double hi,
                         std::size_t panels) {
  if (panels < 2) panels = 2;
  if (panels % 2 != 0) ++panels;
  const double h = (hi - lo) / static_cast<double>(panels);
  double acc = fn(lo) + fn(hi);
  for (std::size_t k = 1; k < panels; ++k) {
    acc += (k % 2 == 1 ? 4.0 : 2.0) * fn(lo + static_cast<double>(k) * h);
  }
  return acc * h / 3.0;
}

std::vector<double> finite_difference(std::span<const double> v, double step) {
  const std::size_t n = v.size();
  std::vector<double> d(n, 0.0);
  if (n < 2) return d;
  if (n == 2) {
    d[0] = d[1] = (v[1] - v[0]) / step;
    return d;
  }
  d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * step);
  d[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * step);
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (k >= 2 && k + 2 < n) {
      d[k] = (-v[k + 2] + 8.0 * v[k + 1] - 8.0 * v[k - 1] + v[k - 2]) / (12.0 * step);
    } else {
      d[k] = (v[k + 1] - v[k - 1]) / (2.0 * step);
    }
  }
  return d;
}

double interpolate_linear(const GridFunction& f, double x) noexcept {
  const Grid& g = f.grid();
  if (x <= g.lo()) return f[0];
  if (x >= g.hi()) return f[f.size() - 1];
  const std::size_t k = g.cell_of(x);
  const double t = (x - g.point(k)) / g.step();
  return (1.0 - t) * f[k] + t * f[k + 1];
}

CubicAntiderivative::CubicAntiderivative(std::span<const double> values, double lo, double step)
    : values_(values.begin(), values.end()), lo_(lo), step_(step) {
  if (values_.size() < 2) fail(ErrorCode::kInvalidArgument, "antiderivative needs two nodes");
  slopes_ = finite_difference(values_, step_);
  cumulative_.assign(values_.size(), 0.0);
  const double h = step_;
  for (std::size_t k = 1; k < values_.size(); ++k) {
    cumulative_[k] = cumulative_[k - 1] + 0.5 * h * (values_[k - 1] + values_[k]) +
                     h * h / 12.0 * (slopes_[k - 1] - slopes_[k]);
  }
}

CubicAntiderivative::CubicAntiderivative(const GridFunction& f)
    : CubicAntiderivative(f.values(), f.grid().lo(), f.grid().step()) {}

double CubicAntiderivative::operator()(double x) const noexcept {
  const std::size_t n = values_.size();
  const double u = (x - lo_) / step_;
  if (!(u > 0.0)) return 0.0;
  if (u >= static_cast<double>(n - 1)) return cumulative_.back();
  const auto k = std::min(static_cast<std::size_t>(u), n - 2);
  const double t = u - static_cast<double>(k);
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double t4 = t3 * t;
  const double i00 = t4 / 2.0 - t3 + t;
  const double i10 = t4 / 4.0 - 2.0 * t3 / 3.0 + t2 / 2.0;
  const double i01 = -t4 / 2.0 + t3;
  const double i11 = t4 / 4.0 - t3 / 3.0;
  const double h = step_;
  return cumulative_[k] + h * (i00 * values_[k] + i10 * h * slopes_[k] + i01 * values_[k + 1] +
                               i11 * h * slopes_[k + 1]);
}

LinearAntiderivative::LinearAntiderivative(const GridFunction& f)
    : values_(f.values().begin(), f.values().end()),
      cumulative_(cumulative_trapezoid(f.values(), f.grid().step())),
      lo_(f.grid().lo()),
      step_(f.grid().step()) {}

double LinearAntiderivative::operator()(double x) const noexcept {
  const std::size_t n = values_.size();
  const double u = (x - lo_) / step_;
  if (!(u > 0.0)) return 0.0;
  if (u >= static_cast<double>(n - 1)) return cumulative_.back();
  const auto k = std::min(static_cast<std::size_t>(u), n - 2);
  const double t = u - static_cast<double>(k);
  return cumulative_[k] + step_ * (values_[k] * t + 0.5 * (values_[k + 1] - values_[k]) * t * t);
}

}  // namespace gstab
