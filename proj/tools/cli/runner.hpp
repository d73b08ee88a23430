#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "config.hpp"
#include "gauss_stab/stability.hpp"

namespace gstab::cli {

struct PhiRow {
  int n = 0;
  double adjoint_residual = 0.0;
  double fourier_l1 = 0.0;
};

struct OperatorsReport {
  double a = 0.0;
  std::vector<PhiRow> phi;               // n = 1..min(n_max, 10)
  std::vector<double> growth;            // fourier l1 for n = 1..64
  double growth_slope = 0.0;             // log-log slope over n = 4, 8, 16, 32, 64
  DenominatorBoundsReport bounds;
  double identity_sup_diff = 0.0;
  double duality_rel_gap = 0.0;
  bool pass = false;
};

struct HermiteReport {
  double a = 0.0;
  int n_max = 0;
  double gram_deviation = 0.0;
  double parseval_ratio = 0.0;  // sum c_n^2 / ||f||^2
  bool pass = false;
};

struct L2Report {
  L2Certificate cert;
  double esseen_T = 0.0;
  EsseenReport esseen;
  std::vector<std::pair<double, double>> levy_profile;  // (h, violation)
};

struct JobResult {
  std::string label;
  std::string scenario;
  std::string prior;
  std::optional<double> sweep_value;
  bool ok = true;
  std::string error;
  double linear_slope = 0.0;
  std::vector<std::array<double, 3>> psi_rows;  // y, psi, a y
  std::optional<L2Report> l2;
  std::optional<L1Certificate> l1;
  std::optional<OperatorsReport> operators;
  std::optional<HermiteReport> hermite;
  bool pass = false;
};

JobResult run_job(const Job& job, std::uint64_t seed);

/// Writes the per-job directory under out_dir. Throws kIoError.
void write_job_outputs(const JobResult& r, const std::string& out_dir);

/// Writes summary.csv and summary.txt.
void write_summary(const std::vector<JobResult>& results, std::uint64_t seed, const std::string& out_dir);

struct RunOptions {
  std::string config_path;
  std::string out_dir;
  unsigned jobs = 0;  // 0: hardware concurrency
  std::optional<std::string> scenario;
};

/// Returns the process exit code: 0 iff every job succeeded and every pass flag holds.
int run(const RunOptions& options, std::ostream& log);

}  // namespace gstab::cli
