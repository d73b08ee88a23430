#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gauss_stab/numerics.hpp"
#include "gauss_stab/priors.hpp"

namespace gstab::cli {

inline constexpr std::uint64_t kDefaultSeed = 20240607;

enum class Certificate { kL2, kL1, kOperators, kHermiteDiag };

std::string to_string(Certificate c);

struct Sweep {
  std::string parameter;  // a prior key, e.g. bump_height
  std::vector<double> values;
};

struct Scenario {
  std::string name;
  PriorSpec prior;
  Grid x_grid = default_x_grid();
  Grid y_grid{-8.0, 8.0, 1025};
  Grid t_grid = default_t_grid();
  Grid omega_grid{-4.0, 4.0, 2049};
  std::vector<Certificate> certificates;
  int n_max = 10;
  std::optional<Sweep> sweep;
};

struct RunConfig {
  std::vector<Scenario> scenarios;
  std::uint64_t seed = kDefaultSeed;
};

/// One concrete pipeline run: a scenario with at most one sweep value applied.
struct Job {
  const Scenario* scenario = nullptr;
  PriorSpec prior;
  std::optional<double> sweep_value;
  std::string label;  // unique directory name
};

/// Parses the INI-style scenario file. Throws Error(kConfigParse) naming the offending field.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Sets `parameter` on a prior spec; throws kConfigParse if it does not apply to the prior kind.
void set_prior_parameter(PriorSpec& spec, const std::string& parameter, double value);

std::vector<Job> expand_jobs(const RunConfig& config);

/// GAUSS_STAB_SEED when set, otherwise the configured seed.
std::uint64_t effective_seed(const RunConfig& config);

}  // namespace gstab::cli
