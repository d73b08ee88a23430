#include "selftest.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "checks.hpp"
#include "gauss_stab/gauss_stab.hpp"

namespace gstab::cli {

namespace {

struct Check {
  std::string name;
  std::function<std::pair<bool, std::string>()> body;
};

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

std::vector<Check> checks(std::uint64_t seed) {
  std::vector<Check> out;
  out.push_back({"exact linearity of mean and median (gaussian 1)", [] {
                   const auto p = build_prior({prior::Gaussian{1.0}}, default_x_grid());
                   const auto f = posterior_field(p, default_y_grid());
                   double dm = 0.0;
                   double dpsi = 0.0;
                   for (std::size_t j = 0; j < f.y_grid.size(); ++j) {
                     const double y = f.y_grid.point(j);
                     if (std::abs(y) > 6.0) continue;
                     dm = std::max(dm, std::abs(f.cond_mean[j] - 0.5 * y));
                     dpsi = std::max(dpsi, std::abs(f.cond_median[j] - 0.5 * y));
                   }
                   return std::pair{dm < 1e-8 && dpsi < 1e-7, fmt::format("mean {:.2e}, median {:.2e}", dm, dpsi)};
                 }});
  out.push_back({"median monotone on benchmark priors", [] {
                   std::size_t v = 0;
                   for (const auto& s : benchmark_priors()) {
                     const auto f = posterior_field(build_prior(s, default_x_grid()), default_y_grid());
                     v += monotonicity_audit(f).median.violations;
                   }
                   return std::pair{v == 0, fmt::format("{} violations", v)};
                 }});
  out.push_back({"Hermite Gram matrix up to 20", [] {
                   const double d = gram_deviation(build_basis(0.5, 20, default_x_grid()));
                   return std::pair{d < 1e-8, fmt::format("deviation {:.2e}", d)};
                 }});
  out.push_back({"adjoint identity and duality", [seed] {
                   const auto r = adjoint_checks(0.5, seed, 4);
                   return std::pair{r.identity_sup_diff < 1e-9 && r.duality_rel_gap < 1e-7,
                                    fmt::format("identity {:.2e}, duality {:.2e}", r.identity_sup_diff,
                                                r.duality_rel_gap)};
                 }});
  out.push_back({"dual function phi_1 adjoint residual", [] {
                   const auto phi = construct_phi(1, OperatorConfig{});
                   return std::pair{phi.adjoint_residual < 1e-3, fmt::format("residual {:.2e}", phi.adjoint_residual)};
                 }});
  out.push_back({"Dawson denominator bounds", [] {
                   const auto r = denominator_bounds_check(0.5, Grid(-10.0, 10.0, 200));
                   return std::pair{r.violations == 0, fmt::format("{} violations of {}", r.violations, r.points)};
                 }});
  out.push_back({"Levy distance symmetry", [seed] {
                   std::mt19937_64 rng(seed);
                   std::uniform_real_distribution<double> shift(-0.5, 0.5);
                   std::uniform_real_distribution<double> var(0.5, 2.0);
                   const Grid g(-20.0, 20.0, 4001);
                   double worst = 0.0;
                   for (int i = 0; i < 5; ++i) {
                     const auto F = normal_cdf_on(g, shift(rng), var(rng));
                     const auto G = normal_cdf_on(g, shift(rng), var(rng));
                     worst = std::max(worst, std::abs(levy_distance(F, G) - levy_distance(G, F)));
                   }
                   return std::pair{worst < 1e-6, fmt::format("asymmetry {:.2e}", worst)};
                 }});
  out.push_back({"L2 bound decreases with epsilon", [] {
                   const double b1 = l2_bound(1e-4, 1.0).bound;
                   const double b2 = l2_bound(1e-8, 1.0).bound;
                   const double b3 = l2_bound(1e-16, 1.0).bound;
                   return std::pair{b1 > b2 && b2 > b3, fmt::format("{:.4f} > {:.4f} > {:.4f}", b1, b2, b3)};
                 }});
  out.push_back({"L2 certificate on bump prior", [] {
                   const auto p = build_prior({prior::GaussianBump{1.0, 0.5, 0.5, 0.02}}, default_x_grid());
                   const auto c = l2_certificate(p, default_y_grid());
                   return std::pair{c.pass, fmt::format("levy {:.3e} <= bound {:.3e}", c.levy, c.bound)};
                 }});
  out.push_back({"L1 certificate on bump prior", [] {
                   const auto p = build_prior({prior::GaussianBump{1.0, 0.5, 0.5, 0.05}}, default_x_grid());
                   const auto c = l1_certificate(p, 10);
                   return std::pair{c.pass, fmt::format("sup_dev {:.3e} <= {:.3e}", c.sup_dev, c.sup_dev_bound)};
                 }});
  out.push_back({"characteristic-function identity (uniform, tau = 1)", [] {
                   const auto p = build_prior({prior::Uniform{-1.0, 1.0}}, default_x_grid());
                   const auto r = diff_char_check(p, 1.0);
                   return std::pair{r.gap < 1e-7 * (1.0 + r.lhs), fmt::format("gap {:.2e}", r.gap)};
                 }});
  return out;
}

}  // namespace

int selftest(std::uint64_t seed, std::ostream& out) {
  int failed = 0;
  for (const auto& c : checks(seed)) {
    bool ok = false;
    std::string detail;
    try {
      std::tie(ok, detail) = c.body();
    } catch (const std::exception& e) {
      detail = e.what();
    }
    if (!ok) ++failed;
    out << fmt::format("[{}] {}: {}\n", ok ? "pass" : "FAIL", c.name, detail);
  }
  out << fmt::format("{} checks failed\n", failed);
  return failed == 0 ? 0 : 1;
}

}  // namespace gstab::cli
