#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cli/config.hpp"
#include "gauss_stab/error.hpp"

namespace fs = std::filesystem;

namespace gstab::cli {
namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(read_file(p));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(std::move(cells));
  }
  return rows;
}

std::size_t column(const std::vector<std::string>& header, const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  ADD_FAILURE() << "no column " << name;
  return 0;
}

/// Whitespace-separated numeric rows, skipping '#' comments.
std::vector<std::vector<double>> read_dat(const fs::path& p) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(read_file(p));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::vector<double> r;
    double v = 0.0;
    while (ls >> v) r.push_back(v);
    rows.push_back(std::move(r));
  }
  return rows;
}

class CliRun : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("gauss_stab_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write_config(const std::string& text) {
    const fs::path p = dir_ / "config.ini";
    std::ofstream(p) << text;
    return p;
  }

  int run(const fs::path& config, const std::string& env = "") {
    const std::string cmd = env + " \"" GAUSS_STAB_EXE "\" run --config \"" + config.string() + "\" --out \"" +
                            (dir_ / "out").string() + "\" > \"" + (dir_ / "log.txt").string() + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  fs::path out() const { return dir_ / "out"; }

  fs::path dir_;
};

std::string config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfigParse);
    return e.what();
  }
  ADD_FAILURE() << "config accepted";
  return "";
}

TEST(Config, ErrorsNameTheField) {
  const std::string scenario = "[s]\nprior = gaussian\nvariance = 1\ncertificates = l2\n";
  EXPECT_NE(config_error(scenario).find("format_version"), std::string::npos);
  EXPECT_NE(config_error("format_version = 2\n" + scenario).find("format_version"), std::string::npos);
  EXPECT_NE(config_error("format_version = 1\n[s]\nprior = gaussian\nvariance = abc\ncertificates = l2\n")
                .find("variance"),
            std::string::npos);
  EXPECT_NE(config_error("format_version = 1\n[s]\nprior = gaussian\ncertificates = l2\nn_max = 99\n").find("n_max"),
            std::string::npos);
  EXPECT_NE(config_error("format_version = 1\n[s]\nprior = gaussian\ncertificates = l3\n").find("l3"),
            std::string::npos);
  EXPECT_NE(config_error("format_version = 1\n[s]\nvariance = 1\ncertificates = l2\n").find("prior"),
            std::string::npos);
}

TEST(Config, SweepExpandsToJobs) {
  const auto cfg = parse_config(
      "format_version = 1\nseed = 5\n[b]\nprior = gaussian_bump\nvariance = 1\ncertificates = l2\n"
      "sweep_parameter = bump_height\nsweep_values = 0.05, 0.02\n");
  EXPECT_EQ(cfg.seed, 5u);
  const auto jobs = expand_jobs(cfg);
  ASSERT_EQ(jobs.size(), 2u);
  EXPECT_NE(jobs[0].label, jobs[1].label);
  EXPECT_EQ(jobs[1].sweep_value, 0.02);
}

TEST_F(CliRun, GaussianScenarioPasses) {
  const auto cfg = write_config(
      "format_version = 1\n[gaussian]\nprior = gaussian\nvariance = 1\ncertificates = l2, l1, operators\n"
      "n_max = 8\n");
  ASSERT_EQ(run(cfg), 0) << read_file(dir_ / "log.txt");

  const auto rows = read_csv(out() / "summary.csv");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_NEAR(std::stod(rows[1][column(rows[0], "epsilon")]), 0.0, 1e-12);
  EXPECT_EQ(rows[1][column(rows[0], "pass")], "1");

  // psi(y) against a y.
  const auto psi = read_dat(out() / "gaussian" / "psi_vs_ay.dat");
  ASSERT_FALSE(psi.empty());
  for (const auto& r : psi) {
    ASSERT_EQ(r.size(), 3u);
    EXPECT_NEAR(r[2], 0.5 * r[0], 1e-15);
    EXPECT_NEAR(r[1], r[2], 1e-7) << r[0];
  }

  // Log-log slope of the phi growth over octaves, refitted here by least squares.
  const auto g = read_dat(out() / "gaussian" / "phi_l1_growth.dat");
  ASSERT_EQ(g.size(), 64u);
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (int k : {4, 8, 16, 32, 64}) {
    const auto& r = g[static_cast<std::size_t>(k - 1)];
    ASSERT_EQ(r[0], k);
    const double x = std::log(r[0]);
    const double y = std::log(r[1]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (5.0 * sxy - sx * sy) / (5.0 * sxx - sx * sx);
  const auto chk = read_csv(out() / "gaussian" / "operator_checks.csv");
  EXPECT_NEAR(std::stod(chk[1][column(chk[0], "growth_slope")]), slope, 1e-12);
  EXPECT_NEAR(slope, 0.25, 0.15);

  for (const char* f : {"levy_profile.dat", "hermite_coeffs.dat", "l2.csv", "l1.csv"}) {
    EXPECT_TRUE(fs::exists(out() / "gaussian" / f)) << f;
  }
  const std::string text = read_file(out() / "summary.csv");
  EXPECT_EQ(text.find('\r'), std::string::npos);
}

TEST_F(CliRun, SweepEpsilonDecreases) {
  const auto cfg = write_config(
      "format_version = 1\n[sweep]\nprior = gaussian_bump\nvariance = 1\nbump_center = 0.5\nbump_width = 0.5\n"
      "certificates = l2\nn_max = 8\nsweep_parameter = bump_height\nsweep_values = 0.05, 0.02, 0.01\n");
  ASSERT_EQ(run(cfg), 0) << read_file(dir_ / "log.txt");
  const auto rows = read_csv(out() / "summary.csv");
  ASSERT_EQ(rows.size(), 4u);
  const std::size_t c = column(rows[0], "epsilon");
  const double e1 = std::stod(rows[1][c]);
  const double e2 = std::stod(rows[2][c]);
  const double e3 = std::stod(rows[3][c]);
  EXPECT_GT(e1, e2);
  EXPECT_GT(e2, e3);
  EXPECT_GT(e3, 0.0);
}

TEST_F(CliRun, InvalidPriorFails) {
  const auto cfg = write_config("format_version = 1\n[bad]\nprior = gaussian\nvariance = -1\ncertificates = l2\n");
  EXPECT_NE(run(cfg), 0);
}

TEST_F(CliRun, MissingConfigFails) { EXPECT_NE(run(dir_ / "absent.ini"), 0); }

TEST_F(CliRun, SeedOverrideFromEnvironment) {
  const auto cfg = write_config(
      "format_version = 1\nseed = 3\n[g]\nprior = gaussian\nvariance = 1\ncertificates = l2\nn_max = 2\n");
  ASSERT_EQ(run(cfg), 0);
  EXPECT_NE(read_file(out() / "summary.txt").find("seed: 3"), std::string::npos);
  ASSERT_EQ(run(cfg, "GAUSS_STAB_SEED=77"), 0);
  EXPECT_NE(read_file(out() / "summary.txt").find("seed: 77"), std::string::npos);
  EXPECT_NE(run(cfg, "GAUSS_STAB_SEED=x"), 0);
}

}  // namespace
}  // namespace gstab::cli
