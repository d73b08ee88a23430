#include <algorithm>
#include <fstream>
#include <sstream>

#include "gauss_stab/priors.hpp"

namespace gstab {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) fail(ErrorCode::kInvalidArgument, "prior field '" + field + "' " + what);
}

double bump_profile(const prior::GaussianBump& b, double x) {
  const double u = (x - b.center) / b.width;
  const double base = std::max(0.0, 1.0 - u * u);
  return b.height * base * base * base;
}

struct TabulatedSamples {
  std::vector<double> x;
  std::vector<double> density;
};

TabulatedSamples read_tabulated(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIoError, "cannot open tabulated prior '" + path + "'");
  TabulatedSamples s;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    double x = 0.0;
    double d = 0.0;
    if (!(ls >> x >> d) || !std::isfinite(x) || !std::isfinite(d)) {
      fail(ErrorCode::kInvalidArgument,
           "tabulated prior '" + path + "' line " + std::to_string(lineno) + " is not 'x density'");
    }
    if (!s.x.empty() && !(x > s.x.back())) {
      fail(ErrorCode::kInvalidArgument, "tabulated prior '" + path + "' x is not strictly increasing at line " +
                                            std::to_string(lineno));
    }
    if (d < 0.0) {
      fail(ErrorCode::kNegativeDensity,
           "tabulated prior '" + path + "' has negative density at line " + std::to_string(lineno));
    }
    s.x.push_back(x);
    s.density.push_back(d);
  }
  if (s.x.size() < 2) fail(ErrorCode::kInvalidArgument, "tabulated prior '" + path + "' needs two rows");
  return s;
}

double interpolate_samples(const TabulatedSamples& s, double x) {
  if (x < s.x.front() || x > s.x.back()) return 0.0;
  const auto it = std::upper_bound(s.x.begin(), s.x.end(), x);
  if (it == s.x.end()) return s.density.back();
  const auto k = static_cast<std::size_t>(it - s.x.begin()) - 1;
  const double t = (x - s.x[k]) / (s.x[k + 1] - s.x[k]);
  return (1.0 - t) * s.density[k] + t * s.density[k + 1];
}

std::vector<double> tabulate(const PriorSpec& spec, const Grid& grid, double shift) {
  const std::size_t n = grid.size();
  std::vector<double> v(n);
  if (const auto* u = std::get_if<prior::Uniform>(&spec.kind)) {
    // Cell averages keep the mass exact when the jumps fall between nodes.
    const double h = grid.step();
    const double height = 1.0 / (u->hi - u->lo);
    for (std::size_t k = 0; k < n; ++k) {
      const double x = grid.point(k) + shift;
      const double overlap = std::max(0.0, std::min(x + 0.5 * h, u->hi) - std::max(x - 0.5 * h, u->lo));
      v[k] = height * overlap / h;
    }
    return v;
  }
  if (const auto* t = std::get_if<prior::Tabulated>(&spec.kind)) {
    const auto samples = read_tabulated(t->path);
    for (std::size_t k = 0; k < n; ++k) v[k] = interpolate_samples(samples, grid.point(k) + shift);
    return v;
  }
  for (std::size_t k = 0; k < n; ++k) v[k] = raw_density(spec, grid.point(k) + shift);
  return v;
}

double linearizing_variance_of(const PriorSpec& spec, double variance) {
  return std::visit(Overloaded{
                        [](const prior::Gaussian& g) { return g.variance; },
                        [](const prior::GaussianBump& b) { return b.variance; },
                        [variance](const auto&) { return variance; },
                    },
                    spec.kind);
}

}  // namespace

void validate(const PriorSpec& spec) {
  std::visit(Overloaded{
                 [](const prior::Gaussian& g) {
                   require(std::isfinite(g.variance) && g.variance > 0.0, "variance", "must be > 0");
                 },
                 [](const prior::GaussianBump& b) {
                   require(std::isfinite(b.variance) && b.variance > 0.0, "variance", "must be > 0");
                   require(std::isfinite(b.center), "bump_center", "must be finite");
                   require(std::isfinite(b.width) && b.width > 0.0, "bump_width", "must be > 0");
                   require(std::isfinite(b.height), "bump_height", "must be finite");
                 },
                 [](const prior::TwoGaussianMixture& m) {
                   require(m.weight > 0.0 && m.weight < 1.0, "weight", "must lie in (0, 1)");
                   require(std::isfinite(m.mean1), "mean1", "must be finite");
                   require(std::isfinite(m.mean2), "mean2", "must be finite");
                   require(std::isfinite(m.variance1) && m.variance1 > 0.0, "variance1", "must be > 0");
                   require(std::isfinite(m.variance2) && m.variance2 > 0.0, "variance2", "must be > 0");
                 },
                 [](const prior::Uniform& u) {
                   require(std::isfinite(u.lo) && std::isfinite(u.hi) && u.lo < u.hi, "lo",
                           "must be finite and below hi");
                 },
                 [](const prior::Tabulated& t) { require(!t.path.empty(), "path", "must be non-empty"); },
             },
             spec.kind);
}

std::string describe(const PriorSpec& spec) {
  std::ostringstream os;
  os.precision(6);
  std::visit(Overloaded{
                 [&](const prior::Gaussian& g) { os << "gaussian(" << g.variance << ")"; },
                 [&](const prior::GaussianBump& b) {
                   os << "gaussian_bump(" << b.variance << ", " << b.center << ", " << b.width << ", "
                      << b.height << ")";
                 },
                 [&](const prior::TwoGaussianMixture& m) {
                   os << "two_gaussian_mixture(" << m.weight << ", " << m.mean1 << ", " << m.variance1
                      << ", " << m.mean2 << ", " << m.variance2 << ")";
                 },
                 [&](const prior::Uniform& u) { os << "uniform(" << u.lo << ", " << u.hi << ")"; },
                 [&](const prior::Tabulated& t) { os << "tabulated(" << t.path << ")"; },
             },
             spec.kind);
  if (spec.center) os << " centred";
  return os.str();
}

double raw_density(const PriorSpec& spec, double x) {
  return std::visit(
      Overloaded{
          [x](const prior::Gaussian& g) { return normal_pdf(x, 0.0, g.variance); },
          [x](const prior::GaussianBump& b) { return normal_pdf(x, 0.0, b.variance) + bump_profile(b, x); },
          [x](const prior::TwoGaussianMixture& m) {
            return m.weight * normal_pdf(x, m.mean1, m.variance1) +
                   (1.0 - m.weight) * normal_pdf(x, m.mean2, m.variance2);
          },
          [x](const prior::Uniform& u) { return (x >= u.lo && x <= u.hi) ? 1.0 / (u.hi - u.lo) : 0.0; },
          [](const prior::Tabulated&) -> double {
            fail(ErrorCode::kInvalidArgument, "tabulated priors have no closed-form density");
          },
      },
      spec.kind);
}

GriddedDensity::GriddedDensity(GridFunction density, double linearizing_variance)
    : density_(std::move(density)),
      cdf_(density_.grid(), cumulative_trapezoid(density_.values(), density_.grid().step())),
      linearizing_variance_(linearizing_variance) {
  const Grid& g = density_.grid();
  std::vector<double> xf(g.size());
  std::vector<double> x2f(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double x = g.point(k);
    xf[k] = x * density_[k];
    max_density_ = std::max(max_density_, density_[k]);
  }
  mean_ = trapezoid(xf, g.step());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double d = g.point(k) - mean_;
    x2f[k] = d * d * density_[k];
  }
  variance_ = trapezoid(x2f, g.step());
}

Grid default_x_grid() { return Grid(-16.0, 16.0, 8192); }
Grid default_t_grid() { return Grid(-12.0, 12.0, 2048); }

GriddedDensity build_prior(const PriorSpec& spec, const Grid& grid) {
  validate(spec);
  auto finish = [&](std::vector<double> v) {
    for (double& d : v) {
      if (d < -1e-15) {
        fail(ErrorCode::kNegativeDensity, describe(spec) + " drives the density below zero");
      }
      d = std::max(d, 0.0);
    }
    const double mass = trapezoid(v, grid.step());
    if (!(mass > 0.0)) fail(ErrorCode::kInvalidArgument, describe(spec) + " has no mass on " + describe(grid));
    for (double& d : v) d /= mass;
    constexpr double kEdge = 1e-12;
    if (v.front() > kEdge || v.back() > kEdge) {
      fail(ErrorCode::kEdgeLeakage, describe(spec) + " is not negligible at the edge of " + describe(grid));
    }
    return v;
  };

  auto values = finish(tabulate(spec, grid, 0.0));
  const double lin_var = linearizing_variance_of(spec, 0.0);
  GriddedDensity density(GridFunction(grid, values), lin_var);
  if (spec.center && density.mean() != 0.0) {
    auto shifted = finish(tabulate(spec, grid, density.mean()));
    GriddedDensity centred(GridFunction(grid, std::move(shifted)), lin_var);
    return GriddedDensity(centred.density(), linearizing_variance_of(spec, centred.variance()));
  }
  return GriddedDensity(density.density(), linearizing_variance_of(spec, density.variance()));
}

namespace {

struct Support {
  std::size_t first;
  std::size_t last;
};

// Nodes whose contribution to any moment-weighted integral is below 1e-20 of the peak are skipped.
Support significant_support(const GriddedDensity& prior) {
  const auto& f = prior.density();
  const double cut = 1e-20 * prior.max_density();
  std::size_t first = 0;
  std::size_t last = f.size() - 1;
  while (first < last && f[first] * (1.0 + std::abs(prior.grid().point(first))) < cut) ++first;
  while (last > first && f[last] * (1.0 + std::abs(prior.grid().point(last))) < cut) --last;
  return {first, last};
}

void check_resolution(const GriddedDensity& prior, double t_max) {
  if (prior.grid().step() * t_max >= 0.5) {
    fail(ErrorCode::kUnderresolvedOscillation,
         "x-step * max|t| = " + std::to_string(prior.grid().step() * t_max) + " must stay below 0.5");
  }
}

std::pair<Complex, Complex> transform_at(const GriddedDensity& prior, const Support& s, double t) {
  const auto& f = prior.density();
  const Grid& g = prior.grid();
  const std::size_t n = g.size();
  Complex phi{};
  Complex dphi{};
  for (std::size_t k = s.first; k <= s.last; ++k) {
    const double w = (k == 0 || k + 1 == n) ? 0.5 : 1.0;
    const double x = g.point(k);
    const Complex e = std::polar(w * f[k], t * x);
    phi += e;
    dphi += Complex(0.0, x) * e;
  }
  return {phi * g.step(), dphi * g.step()};
}

}  // namespace

std::pair<Complex, Complex> char_fn_at(const GriddedDensity& prior, double t) {
  check_resolution(prior, std::abs(t));
  return transform_at(prior, significant_support(prior), t);
}

CharacteristicFunction char_fn(const GriddedDensity& prior, const Grid& t_grid) {
  check_resolution(prior, std::max(std::abs(t_grid.lo()), std::abs(t_grid.hi())));
  const Support s = significant_support(prior);
  const std::size_t nt = t_grid.size();
  std::vector<Complex> phi(nt);
  std::vector<Complex> dphi(nt);
  std::vector<Complex> tilde(nt);
  const double var = prior.variance();
  for (std::size_t j = 0; j < nt; ++j) {
    const double t = t_grid.point(j);
    std::tie(phi[j], dphi[j]) = transform_at(prior, s, t);
    tilde[j] = (dphi[j] + var * t * phi[j]) / (1.0 + var);
  }
  return {ComplexGridFunction(t_grid, std::move(phi)), ComplexGridFunction(t_grid, std::move(dphi)),
          ComplexGridFunction(t_grid, std::move(tilde))};
}

}  // namespace gstab
