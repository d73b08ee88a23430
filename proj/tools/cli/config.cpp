#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

namespace gstab::cli {

namespace pt = boost::property_tree;

namespace {

[[noreturn]] void parse_error(const std::string& where, const std::string& what) {
  fail(ErrorCode::kConfigParse, where + ": " + what);
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& where, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
    parse_error(where, "'" + text + "' is not a finite number");
  }
  return v;
}

long parse_int(const std::string& where, const std::string& text) {
  const std::string t = trim(text);
  long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size()) parse_error(where, "'" + text + "' is not an integer");
  return v;
}

bool parse_bool(const std::string& where, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  parse_error(where, "'" + text + "' is not a boolean");
}

Grid parse_grid(const std::string& where, const std::string& text) {
  const auto parts = split_list(text);
  if (parts.size() != 3) parse_error(where, "grid must be 'lo, hi, points'");
  const double lo = parse_double(where, parts[0]);
  const double hi = parse_double(where, parts[1]);
  const long n = parse_int(where, parts[2]);
  if (!(lo < hi) || n < 2) parse_error(where, "grid needs lo < hi and at least 2 points");
  return Grid(lo, hi, static_cast<std::size_t>(n));
}

Certificate parse_certificate(const std::string& where, const std::string& text) {
  if (text == "l2") return Certificate::kL2;
  if (text == "l1") return Certificate::kL1;
  if (text == "operators") return Certificate::kOperators;
  if (text == "hermite_diag") return Certificate::kHermiteDiag;
  parse_error(where, "unknown certificate '" + text + "' (expected l2, l1, operators, hermite_diag)");
}

const std::set<std::string> kPriorKeys = {"variance",  "bump_center", "bump_width", "bump_height",
                                          "weight",    "mean1",       "variance1",  "mean2",
                                          "variance2", "lo",          "hi"};

PriorSpec make_prior(const std::string& where, const std::string& kind) {
  if (kind == "gaussian") return {prior::Gaussian{}};
  if (kind == "gaussian_bump") return {prior::GaussianBump{}};
  if (kind == "two_gaussian_mixture") return {prior::TwoGaussianMixture{}};
  if (kind == "uniform") return {prior::Uniform{}};
  if (kind == "tabulated") return {prior::Tabulated{}};
  parse_error(where, "unknown prior '" + kind + "'");
}

Scenario parse_scenario(const std::string& name, const pt::ptree& section) {
  const std::string where = "scenario '" + name + "'";
  std::map<std::string, std::string> kv;
  for (const auto& [key, child] : section) {
    if (!child.empty()) parse_error(where, "nested key '" + key + "' is not allowed");
    if (!kv.emplace(key, child.data()).second) parse_error(where, "duplicate key '" + key + "'");
  }

  Scenario s;
  s.name = name;
  const auto prior_it = kv.find("prior");
  if (prior_it == kv.end()) parse_error(where, "missing field 'prior'");
  s.prior = make_prior(where + " field 'prior'", trim(prior_it->second));

  for (const auto& [key, value] : kv) {
    const std::string at = where + " field '" + key + "'";
    if (key == "prior") continue;
    if (key == "centered") {
      s.prior.center = parse_bool(at, value);
    } else if (key == "path") {
      auto* t = std::get_if<prior::Tabulated>(&s.prior.kind);
      if (t == nullptr) parse_error(at, "only applies to tabulated priors");
      t->path = trim(value);
    } else if (kPriorKeys.count(key) != 0) {
      set_prior_parameter(s.prior, key, parse_double(at, value));
    } else if (key == "certificates") {
      for (const auto& c : split_list(value)) {
        const Certificate cert = parse_certificate(at, c);
        if (std::find(s.certificates.begin(), s.certificates.end(), cert) == s.certificates.end()) {
          s.certificates.push_back(cert);
        }
      }
    } else if (key == "n_max") {
      s.n_max = static_cast<int>(parse_int(at, value));
    } else if (key == "x_grid") {
      s.x_grid = parse_grid(at, value);
    } else if (key == "y_grid") {
      s.y_grid = parse_grid(at, value);
    } else if (key == "t_grid") {
      s.t_grid = parse_grid(at, value);
    } else if (key == "omega_grid") {
      s.omega_grid = parse_grid(at, value);
    } else if (key == "sweep_parameter" || key == "sweep_values") {
      // handled below
    } else {
      parse_error(at, "unknown key");
    }
  }

  const bool has_param = kv.count("sweep_parameter") != 0;
  const bool has_values = kv.count("sweep_values") != 0;
  if (has_param != has_values) parse_error(where, "sweep needs both 'sweep_parameter' and 'sweep_values'");
  if (has_param) {
    Sweep sw;
    sw.parameter = trim(kv.at("sweep_parameter"));
    for (const auto& v : split_list(kv.at("sweep_values"))) {
      sw.values.push_back(parse_double(where + " field 'sweep_values'", v));
    }
    if (sw.values.empty()) parse_error(where + " field 'sweep_values'", "list is empty");
    // Surface a bad parameter name at parse time.
    PriorSpec probe = s.prior;
    set_prior_parameter(probe, sw.parameter, sw.values.front());
    s.sweep = std::move(sw);
  }

  if (s.certificates.empty()) parse_error(where + " field 'certificates'", "at least one certificate is required");
  if (s.n_max < 1 || s.n_max > 64) parse_error(where + " field 'n_max'", "must lie in [1, 64]");
  try {
    validate(s.prior);
    if (s.sweep) {
      for (double v : s.sweep->values) {
        PriorSpec p = s.prior;
        set_prior_parameter(p, s.sweep->parameter, v);
        validate(p);
      }
    }
  } catch (const Error& e) {
    parse_error(where, e.what());
  }
  return s;
}

}  // namespace

std::string to_string(Certificate c) {
  switch (c) {
    case Certificate::kL2: return "l2";
    case Certificate::kL1: return "l1";
    case Certificate::kOperators: return "operators";
    case Certificate::kHermiteDiag: return "hermite_diag";
  }
  return "?";
}

void set_prior_parameter(PriorSpec& spec, const std::string& parameter, double value) {
  bool applied = false;
  auto set = [&](const char* key, double& field) {
    if (parameter == key) {
      field = value;
      applied = true;
    }
  };
  std::visit(
      [&](auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, prior::Gaussian>) {
          set("variance", p.variance);
        } else if constexpr (std::is_same_v<T, prior::GaussianBump>) {
          set("variance", p.variance);
          set("bump_center", p.center);
          set("bump_width", p.width);
          set("bump_height", p.height);
        } else if constexpr (std::is_same_v<T, prior::TwoGaussianMixture>) {
          set("weight", p.weight);
          set("mean1", p.mean1);
          set("variance1", p.variance1);
          set("mean2", p.mean2);
          set("variance2", p.variance2);
        } else if constexpr (std::is_same_v<T, prior::Uniform>) {
          set("lo", p.lo);
          set("hi", p.hi);
        }
      },
      spec.kind);
  if (!applied) {
    fail(ErrorCode::kConfigParse, "parameter '" + parameter + "' does not apply to " + describe(spec));
  }
}

RunConfig parse_config(const std::string& text) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    fail(ErrorCode::kConfigParse, fmt::format("line {}: {}", e.line(), e.message()));
  }

  RunConfig cfg;
  bool have_version = false;
  std::set<std::string> names;
  for (const auto& [key, child] : tree) {
    if (child.empty()) {
      if (key == "format_version") {
        if (parse_int("field 'format_version'", child.data()) != 1) {
          parse_error("field 'format_version'", "only version 1 is supported");
        }
        have_version = true;
      } else if (key == "seed") {
        const long s = parse_int("field 'seed'", child.data());
        if (s < 0) parse_error("field 'seed'", "must be non-negative");
        cfg.seed = static_cast<std::uint64_t>(s);
      } else {
        parse_error("top level", "unknown key '" + key + "'");
      }
      continue;
    }
    if (!names.insert(key).second) parse_error("scenario '" + key + "'", "name is not unique");
    cfg.scenarios.push_back(parse_scenario(key, child));
  }
  if (!have_version) parse_error("header", "missing 'format_version = 1'");
  if (cfg.scenarios.empty()) parse_error("config", "no scenarios defined");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIoError, "cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::vector<Job> expand_jobs(const RunConfig& config) {
  std::vector<Job> jobs;
  for (const auto& s : config.scenarios) {
    if (!s.sweep) {
      jobs.push_back({&s, s.prior, std::nullopt, s.name});
      continue;
    }
    for (double v : s.sweep->values) {
      Job j{&s, s.prior, v, fmt::format("{}__{}={:g}", s.name, s.sweep->parameter, v)};
      set_prior_parameter(j.prior, s.sweep->parameter, v);
      jobs.push_back(std::move(j));
    }
  }
  return jobs;
}

std::uint64_t effective_seed(const RunConfig& config) {
  if (const char* env = std::getenv("GAUSS_STAB_SEED"); env != nullptr && *env != '\0') {
    std::uint64_t v = 0;
    const std::string s = trim(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      fail(ErrorCode::kConfigParse, "GAUSS_STAB_SEED must be a non-negative integer");
    }
    return v;
  }
  return config.seed;
}

}  // namespace gstab::cli
