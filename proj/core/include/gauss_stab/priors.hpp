#pragma once

#include <string>
#include <variant>

#include "gauss_stab/numerics.hpp"

namespace gstab {

namespace prior {

struct Gaussian {
  double variance = 1.0;
};

/// N(0, variance) plus the compact bump height * max(0, 1 - ((x - center)/width)^2)^3.
struct GaussianBump {
  double variance = 1.0;
  double center = 0.5;
  double width = 0.5;
  double height = 0.05;
};

struct TwoGaussianMixture {
  double weight = 0.5;  // of the first component
  double mean1 = -1.0;
  double variance1 = 1.0;
  double mean2 = 1.0;
  double variance2 = 1.0;
};

struct Uniform {
  double lo = -1.0;
  double hi = 1.0;
};

/// Two-column text file "x density" with strictly increasing x.
struct Tabulated {
  std::string path;
};

}  // namespace prior

struct PriorSpec {
  std::variant<prior::Gaussian, prior::GaussianBump, prior::TwoGaussianMixture, prior::Uniform,
               prior::Tabulated>
      kind;
  bool center = false;  // subtract the mean after tabulation
};

/// Throws kInvalidArgument naming the offending field.
void validate(const PriorSpec& spec);
std::string describe(const PriorSpec& spec);

/// A prior density on the working grid with its cached summaries.
class GriddedDensity {
 public:
  GriddedDensity(GridFunction density, double linearizing_variance);

  const Grid& grid() const noexcept { return density_.grid(); }
  const GridFunction& density() const noexcept { return density_; }
  const GridFunction& cdf() const noexcept { return cdf_; }
  double mean() const noexcept { return mean_; }
  double variance() const noexcept { return variance_; }
  /// sigma^2 / (1 + sigma^2) for the prior's own variance.
  double slope_a() const noexcept { return variance_ / (1.0 + variance_); }
  /// Largest tabulated density value (the bound M).
  double max_density() const noexcept { return max_density_; }

  /// Variance of the Gaussian the prior is a perturbation of: the Gaussian
  /// component for gaussian / gaussian_bump priors, the prior variance otherwise.
  double linearizing_variance() const noexcept { return linearizing_variance_; }
  double linearizing_slope() const noexcept {
    return linearizing_variance_ / (1.0 + linearizing_variance_);
  }

 private:
  GridFunction density_;
  GridFunction cdf_;
  double mean_ = 0.0;
  double variance_ = 0.0;
  double max_density_ = 0.0;
  double linearizing_variance_ = 0.0;
};

/// x-grid [-16, 16] with 8192 points.
Grid default_x_grid();
/// t-grid [-12, 12] with 2048 points.
Grid default_t_grid();

GriddedDensity build_prior(const PriorSpec& spec, const Grid& grid);

/// Density of the prior evaluated pointwise, before renormalisation. Not available for tabulated priors.
double raw_density(const PriorSpec& spec, double x);

struct CharacteristicFunction {
  ComplexGridFunction phi;        // E[exp(itX)]
  ComplexGridFunction dphi;       // E[iX exp(itX)]
  ComplexGridFunction phi_tilde;  // (dphi + sigma^2 t phi) / (1 + sigma^2)
};

CharacteristicFunction char_fn(const GriddedDensity& prior, const Grid& t_grid);

/// phi and dphi at a single frequency by direct quadrature over the prior grid.
std::pair<Complex, Complex> char_fn_at(const GriddedDensity& prior, double t);

}  // namespace gstab
