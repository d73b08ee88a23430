#include "checks.hpp"

#include <algorithm>
#include <cmath>

#include "gauss_stab/operators.hpp"

namespace gstab::cli {

std::vector<SmoothBump> random_bumps(std::mt19937_64& rng, int count, double max_center) {
  std::uniform_real_distribution<double> centre(-max_center, max_center);
  std::uniform_real_distribution<double> width(0.5, 1.5);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::vector<SmoothBump> out(static_cast<std::size_t>(count));
  for (auto& b : out) {
    b.center = centre(rng);
    b.width = width(rng);
    b.amplitude = amp(rng);
  }
  return out;
}

GridFunction sample_bumps(const Grid& grid, const std::vector<SmoothBump>& bumps) {
  return GridFunction::sample(grid, [&](double x) {
    double v = 0.0;
    for (const auto& b : bumps) {
      const double u = (x - b.center) / b.width;
      if (std::abs(u) < 1.0) {
        const double q = 1.0 - u * u;
        v += b.amplitude * q * q * q * q;
      }
    }
    return v;
  });
}

AdjointReport adjoint_checks(double a, std::uint64_t seed, int pairs) {
  // f lives on [-L, L]; g on [-L/a, L/a] with the same step, so a*y and x/a stay in range.
  constexpr double kHalfWidth = 6.0;
  constexpr double kStep = 1.0 / 64.0;
  const auto nx = static_cast<std::size_t>(std::llround(2.0 * kHalfWidth / kStep)) + 1;
  const Grid xg(-kHalfWidth, kHalfWidth, nx);
  const double ly = std::ceil(kHalfWidth / a / kStep) * kStep;
  const Grid yg(-ly, ly, static_cast<std::size_t>(std::llround(2.0 * ly / kStep)) + 1);

  std::mt19937_64 rng(seed);
  AdjointReport rep;
  rep.pairs = pairs;
  for (int p = 0; p < pairs; ++p) {
    const GridFunction f = sample_bumps(xg, random_bumps(rng, 2, 2.5));
    const GridFunction g = sample_bumps(yg, random_bumps(rng, 2, 2.5));
    const GridFunction adj = apply_T_adjoint(a, g, xg);
    const GridFunction direct = apply_T_adjoint_direct(a, g, xg);
    for (std::size_t k = 0; k < adj.size(); ++k) {
      rep.identity_sup_diff = std::max(rep.identity_sup_diff, std::abs(adj[k] - direct[k]));
    }
    const GridFunction tf = apply_T(a, f, yg);
    const double lhs = inner_product(tf, g);
    const double rhs = inner_product(f, adj);
    rep.duality_rel_gap = std::max(rep.duality_rel_gap, std::abs(lhs - rhs) / (l2_norm(f) * l2_norm(g)));
  }
  return rep;
}

}  // namespace gstab::cli
