#include "runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "checks.hpp"
#include "gauss_stab/hermite.hpp"

namespace gstab::cli {

namespace fs = std::filesystem;

namespace {

constexpr int kPhiResidualOrders = 10;
constexpr int kGrowthOrders = 64;
constexpr int kAdjointPairs = 5;
constexpr std::size_t kLevyProfilePoints = 101;

std::string num(double v) { return fmt::format("{:.17g}", v); }
std::string flag(bool b) { return b ? "1" : "0"; }

std::string csv_text(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

class TextFile {
 public:
  explicit TextFile(const fs::path& path) : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) fail(ErrorCode::kIoError, "cannot write '" + path.string() + "'");
  }
  void line(const std::string& s) { out_ << s << '\n'; }
  void row(const std::vector<std::string>& cells) {
    std::string s;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i != 0) s += ',';
      s += cells[i];
    }
    line(s);
  }
  ~TextFile() = default;
  void close() {
    out_.close();
    if (!out_) fail(ErrorCode::kIoError, "failed writing '" + path_.string() + "'");
  }

 private:
  fs::path path_;
  std::ofstream out_;
};

double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  double mx = 0.0;
  double my = 0.0;
  const auto n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += std::log(xs[i]) / n;
    my += std::log(ys[i]) / n;
  }
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = std::log(xs[i]) - mx;
    sxy += dx * (std::log(ys[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

L2Report run_l2(const GriddedDensity& prior, const Scenario& s) {
  L2Report r;
  r.cert = l2_certificate(prior, s.y_grid);

  const double var = prior.variance();
  const GridFunction G = gaussian_reference_cdf(prior);
  std::vector<double> fv(prior.cdf().values().begin(), prior.cdf().values().end());
  for (double& v : fv) v = std::clamp(v, 0.0, 1.0);
  const GridFunction F(prior.grid(), std::move(fv));

  // Smoothing horizon from the proof, clamped to the tabulated t-range.
  const double eps = std::clamp(r.cert.epsilon, 1e-300, 0.5);
  const double t_max = std::min(s.t_grid.hi(), -s.t_grid.lo());
  r.esseen_T = std::clamp(std::sqrt(std::log(1.0 / eps) / (1.0 + r.cert.delta_star)), 0.5, t_max);
  const auto cf = char_fn(prior, s.t_grid);
  const auto phi_g = ComplexGridFunction::sample(
      s.t_grid, [var](double t) { return Complex(std::exp(-0.5 * var * t * t), 0.0); });
  r.esseen = esseen_check(cf.phi, phi_g, 1.0 / std::sqrt(2.0 * kPi * var), r.esseen_T, F, G);

  const double h_max = std::max(2.0 * r.cert.levy, 1e-6);
  for (std::size_t k = 0; k < kLevyProfilePoints; ++k) {
    const double h = h_max * static_cast<double>(k) / static_cast<double>(kLevyProfilePoints - 1);
    r.levy_profile.emplace_back(h, levy_violation(F, G, h));
  }
  return r;
}

OperatorsReport run_operators(double a, const Scenario& s, int n_max, std::uint64_t seed) {
  OperatorsReport r;
  r.a = a;
  OperatorConfig cfg;
  cfg.a = a;
  cfg.omega_grid = s.omega_grid;
  bool residual_ok = true;
  for (int n = 1; n <= std::min(n_max, kPhiResidualOrders); ++n) {
    const PhiFunction phi = construct_phi(n, cfg);
    r.phi.push_back({n, phi.adjoint_residual, phi.fourier_l1_norm});
    residual_ok = residual_ok && phi.adjoint_residual < 1e-3;
  }
  for (int n = 1; n <= kGrowthOrders; ++n) r.growth.push_back(phi_fourier_l1_norm(n, a, s.omega_grid));
  std::vector<double> ns;
  std::vector<double> l1;
  for (int n : {4, 8, 16, 32, 64}) {
    ns.push_back(n);
    l1.push_back(r.growth[static_cast<std::size_t>(n - 1)]);
  }
  r.growth_slope = loglog_slope(ns, l1);
  r.bounds = denominator_bounds_check(a, Grid(-10.0, 10.0, 200));
  const AdjointReport adj = adjoint_checks(a, seed, kAdjointPairs);
  r.identity_sup_diff = adj.identity_sup_diff;
  r.duality_rel_gap = adj.duality_rel_gap;
  r.pass = residual_ok && r.bounds.violations == 0 && r.identity_sup_diff < 1e-9 &&
           r.duality_rel_gap < 1e-7;
  return r;
}

HermiteReport run_hermite(const GriddedDensity& prior, double a, int n_max) {
  HermiteReport r;
  r.a = a;
  r.n_max = n_max;
  const GridFunction f = pad_for_basis(prior.density(), a / (1.0 - a), n_max);
  const HermiteBasis basis = build_basis(a, n_max, f.grid());
  r.gram_deviation = gram_deviation(basis);
  const auto c = hermite_coefficients(f, basis);
  double energy = 0.0;
  for (double v : c.values) energy += v * v;
  r.parseval_ratio = energy / inner_product(f, f);
  r.pass = r.gram_deviation < 1e-8;
  return r;
}

bool contains(const std::vector<Certificate>& cs, Certificate c) {
  return std::find(cs.begin(), cs.end(), c) != cs.end();
}

}  // namespace

JobResult run_job(const Job& job, std::uint64_t seed) {
  const Scenario& s = *job.scenario;
  JobResult r;
  r.label = job.label;
  r.scenario = s.name;
  r.prior = describe(job.prior);
  r.sweep_value = job.sweep_value;
  try {
    const GriddedDensity prior = build_prior(job.prior, s.x_grid);
    const double a = prior.linearizing_slope();
    r.linear_slope = a;
    const PosteriorField field = posterior_field(prior, s.y_grid);
    for (std::size_t j = 0; j < s.y_grid.size(); ++j) {
      const double y = s.y_grid.point(j);
      r.psi_rows.push_back({y, field.cond_median[j], a * y});
    }
    bool pass = true;
    if (contains(s.certificates, Certificate::kL2)) {
      r.l2 = run_l2(prior, s);
      pass = pass && r.l2->cert.pass && r.l2->esseen.pass;
    }
    if (contains(s.certificates, Certificate::kL1)) {
      r.l1 = l1_certificate(prior, s.n_max, {s.y_grid, s.omega_grid});
      pass = pass && r.l1->pass;
    }
    if (contains(s.certificates, Certificate::kOperators)) {
      r.operators = run_operators(a, s, s.n_max, seed);
      pass = pass && r.operators->pass;
    }
    if (contains(s.certificates, Certificate::kHermiteDiag)) {
      r.hermite = run_hermite(prior, a, s.n_max);
      pass = pass && r.hermite->pass;
    }
    r.pass = pass;
  } catch (const std::exception& e) {
    r.ok = false;
    r.pass = false;
    r.error = e.what();
  }
  return r;
}

void write_job_outputs(const JobResult& r, const std::string& out_dir) {
  const fs::path dir = fs::path(out_dir) / r.label;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorCode::kIoError, "cannot create '" + dir.string() + "': " + ec.message());

  TextFile report(dir / "report.txt");
  report.line("scenario: " + r.scenario);
  report.line("prior: " + r.prior);
  if (r.sweep_value) report.line("sweep value: " + num(*r.sweep_value));
  report.line(std::string("status: ") + (r.ok ? "ok" : "error"));
  if (!r.ok) report.line("error: " + r.error);
  report.line(std::string("pass: ") + (r.pass ? "yes" : "no"));

  if (!r.psi_rows.empty()) {
    TextFile psi(dir / "psi_vs_ay.dat");
    psi.line("# y psi(y) a*y");
    for (const auto& row : r.psi_rows) psi.line(num(row[0]) + " " + num(row[1]) + " " + num(row[2]));
    psi.close();
  }

  if (r.l2) {
    const auto& c = r.l2->cert;
    TextFile csv(dir / "l2.csv");
    csv.row({"epsilon", "levy", "bound", "delta_star", "trivial_bound", "pass", "esseen_T", "esseen_lhs",
             "esseen_rhs", "esseen_pass"});
    csv.row({num(c.epsilon), num(c.levy), num(c.bound), num(c.delta_star), flag(c.trivial_bound), flag(c.pass),
             num(r.l2->esseen_T), num(r.l2->esseen.lhs), num(r.l2->esseen.rhs), flag(r.l2->esseen.pass)});
    csv.close();
    TextFile prof(dir / "levy_profile.dat");
    prof.line("# h max_violation");
    for (const auto& [h, v] : r.l2->levy_profile) prof.line(num(h) + " " + num(v));
    prof.close();
    report.line(fmt::format("L2: epsilon {:.6g}, levy {:.6g}, bound {:.6g} (delta* {:.4g}), {}", c.epsilon,
                            c.levy, c.bound, c.delta_star, c.pass ? "pass" : "FAIL"));
    report.line(fmt::format("    Esseen at T = {:.4g}: {:.6g} <= {:.6g}, {}", r.l2->esseen_T, r.l2->esseen.lhs,
                            r.l2->esseen.rhs, r.l2->esseen.pass ? "pass" : "FAIL"));
  }

  if (r.l1) {
    const auto& c = *r.l1;
    TextFile csv(dir / "l1.csv");
    csv.row({"a", "eps_l1", "sup_dev", "sup_dev_bound", "sup_dev_pass", "B", "M", "C0", "sum_b", "envelope_x_lo",
             "envelope_x_hi", "envelope_truncated", "weighted_T_l1", "weighted_T_edge", "chain_pass",
             "tail_energy", "corollary_sum", "pass"});
    csv.row({num(c.a), num(c.eps_l1), num(c.sup_dev), num(c.sup_dev_bound), flag(c.sup_dev_pass), num(c.B),
             num(c.M), num(c.C0), num(c.envelope.sum), num(c.envelope.x_lo), num(c.envelope.x_hi),
             flag(c.envelope.truncated), num(c.weighted_T_l1), num(c.weighted_T_edge), flag(c.chain_pass),
             num(c.tail_energy), num(c.corollary_sum), flag(c.pass)});
    csv.close();
    TextFile coef(dir / "l1_coefficients.csv");
    coef.row({"n", "c_n", "phi_l1", "bound", "pass"});
    for (const auto& p : c.per_n) coef.row({std::to_string(p.n), num(p.c_n), num(p.phi_l1), num(p.bound), flag(p.pass)});
    coef.close();
    TextFile env(dir / "envelope.csv");
    env.row({"i", "b_i"});
    for (const auto& cell : c.envelope.cells) env.row({std::to_string(cell.i), num(cell.b)});
    env.close();
    TextFile dat(dir / "hermite_coeffs.dat");
    dat.line("# n |c_n| bound_n");
    for (const auto& p : c.per_n) dat.line(std::to_string(p.n) + " " + num(std::abs(p.c_n)) + " " + num(p.bound));
    dat.close();
    report.line(fmt::format("L1: eps_l1 {:.6g}, sup_dev {:.6g} <= {:.6g}, weighted T {:.6g}, C0 {:.6g}, sum b {:.6g}, {}",
                            c.eps_l1, c.sup_dev, c.sup_dev_bound, c.weighted_T_l1, c.C0, c.envelope.sum,
                            c.pass ? "pass" : "FAIL"));
  }

  if (r.operators) {
    const auto& o = *r.operators;
    TextFile csv(dir / "operators.csv");
    csv.row({"n", "adjoint_residual", "fourier_l1"});
    for (const auto& p : o.phi) csv.row({std::to_string(p.n), num(p.adjoint_residual), num(p.fourier_l1)});
    csv.close();
    TextFile chk(dir / "operator_checks.csv");
    chk.row({"a", "growth_slope", "bounds_points", "bounds_violations", "bounds_min_lower_slack",
             "bounds_min_upper_slack", "identity_sup_diff", "duality_rel_gap", "pass"});
    chk.row({num(o.a), num(o.growth_slope), std::to_string(o.bounds.points), std::to_string(o.bounds.violations),
             num(o.bounds.min_lower_slack), num(o.bounds.min_upper_slack), num(o.identity_sup_diff),
             num(o.duality_rel_gap), flag(o.pass)});
    chk.close();
    TextFile dat(dir / "phi_l1_growth.dat");
    dat.line("# n ||F[phi_0 phi_n]||_1");
    for (std::size_t i = 0; i < o.growth.size(); ++i) dat.line(std::to_string(i + 1) + " " + num(o.growth[i]));
    dat.close();
    report.line(fmt::format("operators: growth slope {:.4f}, identity {:.3g}, duality {:.3g}, {}", o.growth_slope,
                            o.identity_sup_diff, o.duality_rel_gap, o.pass ? "pass" : "FAIL"));
  }

  if (r.hermite) {
    const auto& h = *r.hermite;
    TextFile csv(dir / "hermite.csv");
    csv.row({"a", "n_max", "gram_deviation", "parseval_ratio", "pass"});
    csv.row({num(h.a), std::to_string(h.n_max), num(h.gram_deviation), num(h.parseval_ratio), flag(h.pass)});
    csv.close();
    report.line(fmt::format("hermite: gram deviation {:.3g}, parseval {:.9f}, {}", h.gram_deviation,
                            h.parseval_ratio, h.pass ? "pass" : "FAIL"));
  }
  report.close();
}

void write_summary(const std::vector<JobResult>& results, std::uint64_t seed, const std::string& out_dir) {
  TextFile csv(fs::path(out_dir) / "summary.csv");
  csv.row({"label", "scenario", "prior", "sweep_value", "status", "pass", "epsilon", "levy", "l2_bound",
           "delta_star", "l2_pass", "esseen_pass", "eps_l1", "sup_dev", "sup_dev_bound", "B", "M", "C0", "sum_b",
           "weighted_T_l1", "chain_pass", "max_abs_cn", "l1_pass", "max_adjoint_residual", "phi_growth_slope",
           "operators_pass", "gram_deviation", "parseval_ratio", "hermite_pass", "error"});
  for (const auto& r : results) {
    std::vector<std::string> row{csv_text(r.label), csv_text(r.scenario), csv_text(r.prior),
                                 r.sweep_value ? num(*r.sweep_value) : "", r.ok ? "ok" : "error", flag(r.pass)};
    if (r.l2) {
      const auto& c = r.l2->cert;
      for (auto& v : {num(c.epsilon), num(c.levy), num(c.bound), num(c.delta_star), flag(c.pass),
                      flag(r.l2->esseen.pass)}) {
        row.push_back(v);
      }
    } else {
      row.insert(row.end(), 6, "");
    }
    if (r.l1) {
      const auto& c = *r.l1;
      double max_c = 0.0;
      for (const auto& p : c.per_n) max_c = std::max(max_c, std::abs(p.c_n));
      for (auto& v : {num(c.eps_l1), num(c.sup_dev), num(c.sup_dev_bound), num(c.B), num(c.M), num(c.C0),
                      num(c.envelope.sum), num(c.weighted_T_l1), flag(c.chain_pass), num(max_c), flag(c.pass)}) {
        row.push_back(v);
      }
    } else {
      row.insert(row.end(), 11, "");
    }
    if (r.operators) {
      double worst = 0.0;
      for (const auto& p : r.operators->phi) worst = std::max(worst, p.adjoint_residual);
      row.push_back(num(worst));
      row.push_back(num(r.operators->growth_slope));
      row.push_back(flag(r.operators->pass));
    } else {
      row.insert(row.end(), 3, "");
    }
    if (r.hermite) {
      row.push_back(num(r.hermite->gram_deviation));
      row.push_back(num(r.hermite->parseval_ratio));
      row.push_back(flag(r.hermite->pass));
    } else {
      row.insert(row.end(), 3, "");
    }
    row.push_back(csv_text(r.error));
    csv.row(row);
  }
  csv.close();

  TextFile txt(fs::path(out_dir) / "summary.txt");
  txt.line(fmt::format("seed: {}", seed));
  std::size_t passed = 0;
  for (const auto& r : results) {
    if (r.pass) ++passed;
    txt.line(fmt::format("{:<40} {:<6} {}", r.label, r.ok ? (r.pass ? "pass" : "FAIL") : "ERROR",
                         r.ok ? r.prior : r.error));
  }
  txt.line(fmt::format("{} of {} runs passed", passed, results.size()));
  txt.close();
}

int run(const RunOptions& options, std::ostream& log) {
  RunConfig config = load_config(options.config_path);
  if (options.scenario) {
    std::erase_if(config.scenarios, [&](const Scenario& s) { return s.name != *options.scenario; });
    if (config.scenarios.empty()) {
      fail(ErrorCode::kConfigParse, "no scenario named '" + *options.scenario + "'");
    }
  }
  const std::uint64_t seed = effective_seed(config);
  const std::vector<Job> jobs = expand_jobs(config);

  std::error_code ec;
  fs::create_directories(options.out_dir, ec);
  if (ec) fail(ErrorCode::kIoError, "cannot create '" + options.out_dir + "': " + ec.message());

  unsigned workers = options.jobs != 0 ? options.jobs : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(jobs.size()));

  std::vector<JobResult> results(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      results[i] = run_job(jobs[i], seed);
      try {
        write_job_outputs(results[i], options.out_dir);
      } catch (const std::exception& e) {
        results[i].ok = false;
        results[i].pass = false;
        results[i].error = e.what();
      }
      const std::lock_guard lock(log_mutex);
      log << fmt::format("[{}] {}\n", results[i].ok ? (results[i].pass ? "pass" : "FAIL") : "ERROR",
                         results[i].label);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  write_summary(results, seed, options.out_dir);
  const bool all = std::all_of(results.begin(), results.end(), [](const JobResult& r) { return r.pass; });
  log << fmt::format("{} runs, {}\n", results.size(), all ? "all pass" : "failures present");
  return all ? 0 : 1;
}

}  // namespace gstab::cli
