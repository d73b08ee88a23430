#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "gauss_stab/numerics.hpp"

namespace gstab::cli {

/// amplitude * (1 - ((x - center)/width)^2)^4 on |x - center| < width; C^3 and compactly supported.
struct SmoothBump {
  double center = 0.0;
  double width = 1.0;
  double amplitude = 1.0;
};

std::vector<SmoothBump> random_bumps(std::mt19937_64& rng, int count, double max_center);
GridFunction sample_bumps(const Grid& grid, const std::vector<SmoothBump>& bumps);

struct AdjointReport {
  double identity_sup_diff = 0.0;  // max |direct T* g - (-T_{1/a} g)|
  double duality_rel_gap = 0.0;    // max |<T f, g> - <f, T* g>| / (||f|| ||g||)
  int pairs = 0;
};

/// Adjoint identity and duality over `pairs` seeded bump pairs at slope a.
AdjointReport adjoint_checks(double a, std::uint64_t seed, int pairs);

}  // namespace gstab::cli
