// specop: two-sample spectral comparison for functional time series.
//
// Subcommands: test (bootstrap-calibrated comparison of two samples),
// cv (bandwidth selection), diagnose (statistic + decompositions, no
// bootstrap), simulate (Monte-Carlo size/power tables and null densities).
// Every run is a pure function of (input files, flags, seed); a manifest
// recording the resolved configuration is written next to the outputs.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "specop/bandwidth.hpp"
#include "specop/bootstrap.hpp"
#include "specop/errors.hpp"
#include "specop/fdata.hpp"
#include "specop/json_io.hpp"
#include "specop/simulate.hpp"
#include "specop/spectral.hpp"
#include "specop/teststat.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

std::string fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw specop::ParseError("cannot open '" + path + "'");
  std::uint64_t h = 1469598103934665603ULL;
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)), in.gcount() > 0) {
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ULL;
    }
  }
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
  return hex;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw specop::ParseError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw specop::ParseError("write failure on '" + path.string() + "'");
}

void write_json_file(const fs::path& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

// Flags shared by the data-driven subcommands.
struct CommonOpts {
  double b = 0.0;
  int B = 1000;
  std::uint64_t seed = 0;
  int workers = 0;
  std::string kernel = "epanechnikov-2pi";
  bool wrap = false;
  std::string studentization = "full";
  int n_basis = 21;
  std::string grid = "midpoint";
  std::string out_dir = "specop-out";

  CLI::Option* b_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* n_basis_opt = nullptr;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_b) {
  if (with_b) {
    o.b_opt = cmd->add_option("--b", o.b,
                              "Smoothing bandwidth in (0, pi); omit to select by "
                              "cross-validation");
  }
  cmd->add_option("--B", o.B, "Bootstrap replicates")->capture_default_str();
  o.seed_opt = cmd->add_option("--seed", o.seed,
                               "Master seed (fallback: SPECOP_SEED, then 0)");
  cmd->add_option("--workers", o.workers, "Worker threads, 0 = hardware concurrency")
      ->capture_default_str();
  cmd->add_option("--kernel", o.kernel, "Smoothing weight kernel")->capture_default_str();
  cmd->add_flag("--wrap-frequencies", o.wrap,
                "Wrap smoothing-window distances into (-pi, pi] instead of truncating");
  cmd->add_option("--studentization", o.studentization,
                  "Replicate studentization: per-replicate constants (full) or "
                  "sample-level plug-in")
      ->check(CLI::IsMember({"full", "plugin"}))
      ->capture_default_str();
  o.n_basis_opt = cmd->add_option("--n-basis", o.n_basis,
                                  "Trigonometric basis size for curve smoothing "
                                  "(odd, <= grid size; 0 disables; default 21, "
                                  "clamped to the grid when left at default)");
  cmd->add_option("--grid", o.grid, "Default grid layout for headerless CSV input")
      ->check(CLI::IsMember({"midpoint", "endpoint"}))
      ->capture_default_str();
  cmd->add_option("--out", o.out_dir, "Output directory")->capture_default_str();
}

std::uint64_t resolve_seed(const CommonOpts& o) {
  if (o.seed_opt != nullptr && o.seed_opt->count() > 0) return o.seed;
  if (const char* env = std::getenv("SPECOP_SEED")) {
    errno = 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0' || errno == ERANGE) {
      throw specop::ContractViolation("SPECOP_SEED must be a nonnegative integer, got '" +
                                      std::string(env) + "'");
    }
    return v;
  }
  return 0;
}

int resolve_n_basis(const CommonOpts& o, int k) {
  if (o.n_basis_opt != nullptr && o.n_basis_opt->count() > 0) return o.n_basis;
  int nb = std::min(21, k);
  if (nb % 2 == 0) --nb;
  return nb < 1 ? 0 : nb;
}

specop::GridPolicy grid_policy(const CommonOpts& o) {
  return o.grid == "midpoint" ? specop::GridPolicy::midpoint : specop::GridPolicy::endpoint;
}

specop::StudentizationMode studentization_mode(const CommonOpts& o) {
  return o.studentization == "full" ? specop::StudentizationMode::full
                                    : specop::StudentizationMode::plugin;
}

struct LoadedPair {
  specop::FunctionalSample x;
  specop::FunctionalSample y;
  int n_basis_used = 0;
};

// load -> equal-shape checks -> center -> optional basis smoothing.
LoadedPair load_pair(const std::string& x_path, const std::string& y_path,
                     const CommonOpts& o) {
  specop::FunctionalSample x = specop::load_csv(x_path, ',', grid_policy(o));
  specop::FunctionalSample y = specop::load_csv(y_path, ',', grid_policy(o));
  if (x.length() != y.length()) {
    throw specop::ScopeError("samples must have equal length: '" + x_path + "' has T=" +
                             std::to_string(x.length()) + ", '" + y_path + "' has T=" +
                             std::to_string(y.length()) +
                             "; unequal-length designs are out of scope");
  }
  if (x.grid_size() != y.grid_size()) {
    throw specop::ScopeError("samples must share one grid: '" + x_path + "' has k=" +
                             std::to_string(x.grid_size()) + ", '" + y_path + "' has k=" +
                             std::to_string(y.grid_size()));
  }
  if (x.grid() != y.grid()) {
    throw specop::ScopeError("samples must share one grid: coordinate lists differ");
  }
  specop::FunctionalSample xc = specop::center(x);
  specop::FunctionalSample yc = specop::center(y);
  const int nb = resolve_n_basis(o, xc.grid_size());
  if (nb > 0) {
    xc = specop::fourier_smooth(xc, nb);
    yc = specop::fourier_smooth(yc, nb);
  }
  return LoadedPair{std::move(xc), std::move(yc), nb};
}

struct ResolvedBandwidth {
  double b = 0.0;
  std::string source;  // "flag" or "cv"
};

ResolvedBandwidth resolve_bandwidth(const CommonOpts& o, const LoadedPair& pair,
                                    const specop::WeightKernel& kernel) {
  if (o.b_opt != nullptr && o.b_opt->count() > 0) return {o.b, "flag"};
  const specop::CVResult cv =
      specop::select_bandwidth(pair.x, pair.y, specop::default_bandwidth_grid(), kernel);
  return {cv.b_cv, "cv"};
}

json common_parameters(const CommonOpts& o, std::uint64_t seed, int n_basis_used) {
  return json{{"B", o.B},
              {"seed", seed},
              {"workers", o.workers},
              {"kernel", o.kernel},
              {"wrap_frequencies", o.wrap},
              {"studentization", o.studentization},
              {"n_basis", n_basis_used},
              {"grid", o.grid}};
}

void write_manifest(const fs::path& out_dir, const std::string& subcommand,
                    json parameters, const std::vector<std::string>& input_paths) {
  json inputs = json::array();
  for (const auto& p : input_paths) {
    inputs.push_back(json{{"path", p}, {"fnv1a64", fnv1a64_file(p)}});
  }
  write_json_file(out_dir / "manifest.json", json{{"subcommand", subcommand},
                                                  {"version", kVersion},
                                                  {"parameters", std::move(parameters)},
                                                  {"inputs", std::move(inputs)}});
}

void write_diagnostic_csvs(const fs::path& out_dir, const specop::TestResult& result,
                           const specop::Grid& grid) {
  std::string q = "lambda,q\n";
  for (std::size_t j = 0; j < result.q_profile.size(); ++j) {
    q += format17(2.0 * M_PI * static_cast<double>(j) / result.T);
    q += ',';
    q += format17(result.q_profile[j]);
    q += '\n';
  }
  write_text(out_dir / "q_profile.csv", q);

  std::string d = "sigma,tau,d2\n";
  for (int r = 0; r < result.d_map.rows(); ++r) {
    for (int l = 0; l < result.d_map.cols(); ++l) {
      d += format17(grid.point(r));
      d += ',';
      d += format17(grid.point(l));
      d += ',';
      d += format17(result.d_map(r, l));
      d += '\n';
    }
  }
  write_text(out_dir / "d_map.csv", d);
}

// ---------------------------------------------------------------------------
// test

struct TestOpts {
  CommonOpts common;
  std::string x_path;
  std::string y_path;
  std::string dump_bootstrap;
};

void run_test(const TestOpts& opts) {
  const CommonOpts& o = opts.common;
  const fs::path out_dir(o.out_dir);
  fs::create_directories(out_dir);

  const specop::WeightKernel kernel = specop::WeightKernel::by_name(o.kernel);
  const LoadedPair pair = load_pair(opts.x_path, opts.y_path, o);
  const ResolvedBandwidth rb = resolve_bandwidth(o, pair, kernel);
  const std::uint64_t seed = resolve_seed(o);

  specop::BootstrapPlan plan;
  plan.B = o.B;
  plan.master_seed = seed;
  plan.workers = o.workers;
  plan.studentization = studentization_mode(o);
  const specop::FrequencyWrap wrap =
      o.wrap ? specop::FrequencyWrap::periodic : specop::FrequencyWrap::none;

  const specop::BootstrapRun run = specop::run(pair.x, pair.y, rb.b, kernel, plan, wrap);

  json result = specop::to_json(run.result);
  result["t_star_sorted"] = run.distribution.t_star_sorted;
  const std::string text = result.dump(2) + "\n";
  std::cout << text;
  write_text(out_dir / "result.json", text);
  write_diagnostic_csvs(out_dir, run.result, pair.x.grid());

  if (!opts.dump_bootstrap.empty()) {
    std::string t = "t_star\n";
    for (double v : run.distribution.t_star) {
      t += format17(v);
      t += '\n';
    }
    write_text(opts.dump_bootstrap, t);
  }

  json params = common_parameters(o, seed, pair.n_basis_used);
  params["b"] = rb.b;
  params["b_source"] = rb.source;
  params["dump_bootstrap"] = opts.dump_bootstrap;
  write_manifest(out_dir, "test", std::move(params), {opts.x_path, opts.y_path});
}

// ---------------------------------------------------------------------------
// cv

struct CvOpts {
  CommonOpts common;
  std::string x_path;
  std::string y_path;
  std::vector<double> b_grid;
};

void run_cv(const CvOpts& opts) {
  const CommonOpts& o = opts.common;
  const fs::path out_dir(o.out_dir);
  fs::create_directories(out_dir);

  const specop::WeightKernel kernel = specop::WeightKernel::by_name(o.kernel);
  const LoadedPair pair = load_pair(opts.x_path, opts.y_path, o);
  const std::vector<double> grid =
      opts.b_grid.empty() ? specop::default_bandwidth_grid() : opts.b_grid;
  const specop::CVResult cv = specop::select_bandwidth(pair.x, pair.y, grid, kernel);

  const std::string text = json{{"b_cv", cv.b_cv}}.dump(2) + "\n";
  std::cout << text;
  write_text(out_dir / "cv_result.json", text);

  std::string table = "b,cv\n";
  for (std::size_t i = 0; i < cv.b_grid.size(); ++i) {
    table += format17(cv.b_grid[i]);
    table += ',';
    table += format17(cv.scores[i]);
    table += '\n';
  }
  write_text(out_dir / "cv_scores.csv", table);

  json params = common_parameters(o, resolve_seed(o), pair.n_basis_used);
  params["b_grid"] = cv.b_grid;
  write_manifest(out_dir, "cv", std::move(params), {opts.x_path, opts.y_path});
}

// ---------------------------------------------------------------------------
// diagnose

struct DiagnoseOpts {
  CommonOpts common;
  std::string x_path;
  std::string y_path;
};

void run_diagnose(const DiagnoseOpts& opts) {
  const CommonOpts& o = opts.common;
  const fs::path out_dir(o.out_dir);
  fs::create_directories(out_dir);

  const specop::WeightKernel kernel = specop::WeightKernel::by_name(o.kernel);
  const LoadedPair pair = load_pair(opts.x_path, opts.y_path, o);
  const ResolvedBandwidth rb = resolve_bandwidth(o, pair, kernel);
  const specop::FrequencyWrap wrap =
      o.wrap ? specop::FrequencyWrap::periodic : specop::FrequencyWrap::none;

  const specop::SpectralEstimate fx = specop::smooth(specop::dft_frame(pair.x), rb.b, kernel, wrap);
  const specop::SpectralEstimate fy = specop::smooth(specop::dft_frame(pair.y), rb.b, kernel, wrap);
  const specop::TestResult result = specop::evaluate(fx, fy);

  const std::string text = specop::to_json(result).dump(2) + "\n";
  std::cout << text;
  write_text(out_dir / "result.json", text);
  write_diagnostic_csvs(out_dir, result, pair.x.grid());

  write_json_file(out_dir / "spectral_x.json", specop::to_json(fx));
  write_json_file(out_dir / "spectral_y.json", specop::to_json(fy));
  write_json_file(out_dir / "spectral_pooled.json", specop::to_json(specop::pooled(fx, fy)));

  const auto gx = specop::integrated_scalar_estimate(pair.x, rb.b, kernel, wrap);
  const auto gy = specop::integrated_scalar_estimate(pair.y, rb.b, kernel, wrap);
  std::string scalar = "lambda,g_x,g_y\n";
  for (std::size_t t = 0; t < gx.size(); ++t) {
    scalar += format17(2.0 * M_PI * static_cast<double>(t) / result.T);
    scalar += ',';
    scalar += format17(gx[t]);
    scalar += ',';
    scalar += format17(gy[t]);
    scalar += '\n';
  }
  write_text(out_dir / "scalar_spectrum.csv", scalar);

  json params = common_parameters(o, resolve_seed(o), pair.n_basis_used);
  params["b"] = rb.b;
  params["b_source"] = rb.source;
  write_manifest(out_dir, "diagnose", std::move(params), {opts.x_path, opts.y_path});
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateOpts {
  CommonOpts common;
  std::string config_path;
  std::vector<int> T_list{100};
  std::vector<double> b_list{0.2};
  std::vector<double> a2_list{0.0};
  std::vector<double> alpha_list{0.01, 0.05, 0.10};
  int R = 500;
  int k = 21;
  bool null_density = false;
  int n_datasets = 3;
};

void run_simulate_table(const SimulateOpts& opts, const fs::path& out_dir,
                        std::uint64_t seed) {
  const CommonOpts& o = opts.common;
  specop::ExperimentConfig config;
  config.T_list = opts.T_list;
  config.b_list = opts.b_list;
  config.a2_list = opts.a2_list;
  config.alpha_list = opts.alpha_list;
  config.R = opts.R;
  config.B = o.B;
  config.master_seed = seed;
  config.n_basis = (o.n_basis_opt->count() > 0) ? o.n_basis : std::min(21, opts.k - (1 - opts.k % 2));
  config.k = opts.k;
  config.grid_policy = grid_policy(o);
  config.workers = o.workers;
  config.studentization = studentization_mode(o);

  const specop::WeightKernel kernel = specop::WeightKernel::by_name(o.kernel);
  const std::vector<specop::CellResult> cells = specop::run_table(config, kernel);

  std::string header = "T,b,a2";
  for (double a : config.alpha_list) {
    header += ",rate_" + format_short(a) + ",se_" + format_short(a);
  }
  std::string rates = header + "\n";
  json summary = json::array();
  for (const auto& cell : cells) {
    rates += std::to_string(cell.T);
    rates += ',';
    rates += format17(cell.b);
    rates += ',';
    rates += format17(cell.a2);
    for (std::size_t a = 0; a < cell.alpha.size(); ++a) {
      rates += ',';
      rates += format17(cell.rejection_rate[a]);
      rates += ',';
      rates += format17(cell.std_error[a]);
    }
    rates += '\n';
    summary.push_back(json{{"T", cell.T},
                           {"b", cell.b},
                           {"a2", cell.a2},
                           {"alpha", cell.alpha},
                           {"rejection_rate", cell.rejection_rate},
                           {"std_error", cell.std_error}});
  }
  write_text(out_dir / "rejection_rates.csv", rates);

  std::string pv = "T,b,a2,rep,p_value,t_stat\n";
  for (const auto& cell : cells) {
    for (std::size_t r = 0; r < cell.p_values.size(); ++r) {
      pv += std::to_string(cell.T);
      pv += ',';
      pv += format17(cell.b);
      pv += ',';
      pv += format17(cell.a2);
      pv += ',';
      pv += std::to_string(r);
      pv += ',';
      pv += format17(cell.p_values[r]);
      pv += ',';
      pv += format17(cell.t_stats[r]);
      pv += '\n';
    }
  }
  write_text(out_dir / "p_values.csv", pv);

  const std::string text = summary.dump(2) + "\n";
  std::cout << text;

  json params = common_parameters(o, seed, config.n_basis);
  params["T"] = config.T_list;
  params["b"] = config.b_list;
  params["a2"] = config.a2_list;
  params["alpha"] = config.alpha_list;
  params["R"] = config.R;
  params["k"] = config.k;
  params["mode"] = "table";
  write_manifest(out_dir, "simulate", std::move(params), {});
}

void run_simulate_null_density(const SimulateOpts& opts, const fs::path& out_dir,
                               std::uint64_t seed) {
  const CommonOpts& o = opts.common;
  if (opts.T_list.size() != 1 || opts.b_list.size() != 1) {
    throw specop::ContractViolation(
        "simulate --null-density expects exactly one --T and one --b value");
  }
  const int T = opts.T_list.front();
  const double b = opts.b_list.front();
  const int n_basis = (o.n_basis_opt->count() > 0) ? o.n_basis
                                                   : std::min(21, opts.k - (1 - opts.k % 2));
  const specop::WeightKernel kernel = specop::WeightKernel::by_name(o.kernel);
  const specop::NullDensityResult res = specop::run_null_density(
      T, b, opts.R, o.B, opts.n_datasets, seed, kernel, o.workers, n_basis, opts.k,
      grid_policy(o));

  std::string exact = "t\n";
  for (double v : res.exact_t) {
    exact += format17(v);
    exact += '\n';
  }
  write_text(out_dir / "exact_t.csv", exact);

  std::string boot = "dataset,t\n";
  for (std::size_t d = 0; d < res.bootstrap_t.size(); ++d) {
    for (double v : res.bootstrap_t[d]) {
      boot += std::to_string(res.dataset_indices[d]);
      boot += ',';
      boot += format17(v);
      boot += '\n';
    }
  }
  write_text(out_dir / "bootstrap_t.csv", boot);

  const std::string text = json{{"R_exact", opts.R},
                                {"B", o.B},
                                {"T", T},
                                {"b", b},
                                {"dataset_indices", res.dataset_indices}}
                               .dump(2) +
                           "\n";
  std::cout << text;

  json params = common_parameters(o, seed, n_basis);
  params["T"] = T;
  params["b"] = b;
  params["R"] = opts.R;
  params["k"] = opts.k;
  params["n_datasets"] = opts.n_datasets;
  params["mode"] = "null-density";
  write_manifest(out_dir, "simulate", std::move(params), {});
}

void run_simulate(const SimulateOpts& opts) {
  const fs::path out_dir(opts.common.out_dir);
  fs::create_directories(out_dir);
  const std::uint64_t seed = resolve_seed(opts.common);
  if (opts.null_density) {
    run_simulate_null_density(opts, out_dir, seed);
  } else {
    run_simulate_table(opts, out_dir, seed);
  }
}

// CLI11 applies config files to the root command only; a config option
// registered on a subcommand consumes its argument but the file is never
// read back. The simulate subcommand therefore expands its own file before
// parsing: each `key=value` line becomes the matching `--key value` tokens,
// spliced in right after the subcommand name. Keys the command line already
// sets are dropped, so explicit flags win. `args` excludes the program name.
std::vector<std::string> expand_simulate_config(const std::vector<std::string>& args,
                                                const CLI::App& sim_cmd) {
  std::size_t sub = 0;
  while (sub < args.size() && !args[sub].empty() && args[sub][0] == '-') ++sub;
  if (sub >= args.size() || args[sub] != sim_cmd.get_name()) return args;

  std::string path;
  bool has_config = false;
  for (std::size_t i = sub + 1; i < args.size() && !has_config; ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw specop::ParseError("--config expects a file path");
      path = args[i + 1];
      has_config = true;
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      has_config = true;
    }
  }
  if (!has_config) return args;
  if (path.empty()) throw specop::ParseError("--config expects a file path");

  const auto given = [&](const std::string& flag) {
    for (std::size_t i = sub + 1; i < args.size(); ++i) {
      if (args[i] == flag || args[i].rfind(flag + "=", 0) == 0) return true;
    }
    return false;
  };

  std::ifstream in(path);
  if (!in) throw specop::ParseError("cannot open config file '" + path + "'");
  std::vector<std::string> spliced;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string text = CLI::detail::trim_copy(line);
    if (text.empty() || text[0] == '#') continue;
    const auto at = [&] { return path + " line " + std::to_string(lineno); };
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw specop::ParseError(at() + ": expected key=value, got '" + text + "'");
    }
    const std::string key = CLI::detail::trim_copy(text.substr(0, eq));
    const std::string value = CLI::detail::trim_copy(text.substr(eq + 1));
    if (key.empty() || key == "config") {
      throw specop::ParseError(at() + ": bad key '" + key + "'");
    }
    const std::string flag = "--" + key;
    const CLI::Option* opt = sim_cmd.get_option_no_throw(flag);
    if (opt == nullptr) {
      throw specop::ParseError(at() + ": unknown key '" + key + "'");
    }
    if (given(flag)) continue;
    if (opt->get_expected_min() == 0) {
      spliced.push_back(flag + "=" + value);
    } else {
      spliced.push_back(flag);
      spliced.push_back(value);
    }
  }

  std::vector<std::string> out(args.begin(), args.begin() + static_cast<std::ptrdiff_t>(sub) + 1);
  out.insert(out.end(), spliced.begin(), spliced.end());
  out.insert(out.end(), args.begin() + static_cast<std::ptrdiff_t>(sub) + 1, args.end());
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-sample spectral comparison for functional time series"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  TestOpts test_opts;
  CLI::App* test_cmd = app.add_subcommand(
      "test", "Bootstrap-calibrated comparison of two samples");
  test_cmd->add_option("x", test_opts.x_path, "CSV of the first sample")
      ->required()
      ->check(CLI::ExistingFile);
  test_cmd->add_option("y", test_opts.y_path, "CSV of the second sample")
      ->required()
      ->check(CLI::ExistingFile);
  add_common(test_cmd, test_opts.common, true);
  test_cmd->add_option("--dump-bootstrap", test_opts.dump_bootstrap,
                       "Also write the raw bootstrap statistic draws to this CSV");
  test_cmd->callback([&] { run_test(test_opts); });

  CvOpts cv_opts;
  CLI::App* cv_cmd = app.add_subcommand("cv", "Cross-validated bandwidth selection");
  cv_cmd->add_option("x", cv_opts.x_path, "CSV of the first sample")
      ->required()
      ->check(CLI::ExistingFile);
  cv_cmd->add_option("y", cv_opts.y_path, "CSV of the second sample")
      ->required()
      ->check(CLI::ExistingFile);
  add_common(cv_cmd, cv_opts.common, false);
  cv_cmd->add_option("--b-grid", cv_opts.b_grid,
                     "Candidate bandwidths (ascending, in (0, pi)); default: 25 "
                     "log-spaced points in [0.02, 0.6]")
      ->delimiter(',');
  cv_cmd->callback([&] { run_cv(cv_opts); });

  DiagnoseOpts diag_opts;
  CLI::App* diag_cmd = app.add_subcommand(
      "diagnose", "Statistic, per-frequency and per-location decompositions, "
                  "spectral estimates; no bootstrap");
  diag_cmd->add_option("x", diag_opts.x_path, "CSV of the first sample")
      ->required()
      ->check(CLI::ExistingFile);
  diag_cmd->add_option("y", diag_opts.y_path, "CSV of the second sample")
      ->required()
      ->check(CLI::ExistingFile);
  add_common(diag_cmd, diag_opts.common, true);
  diag_cmd->callback([&] { run_diagnose(diag_opts); });

  SimulateOpts sim_opts;
  CLI::App* sim_cmd = app.add_subcommand(
      "simulate", "Monte-Carlo size/power tables and null-density draws");
  sim_cmd->add_option("--config", sim_opts.config_path,
                      "Flat key=value file of simulate options; '#' comments and "
                      "blank lines ignored; explicit flags take precedence");
  sim_cmd->add_option("--T", sim_opts.T_list, "Series lengths")
      ->delimiter(',')
      ->capture_default_str();
  sim_cmd->add_option("--a2", sim_opts.a2_list, "Second-lag coefficients (0 = null)")
      ->delimiter(',')
      ->capture_default_str();
  sim_cmd->add_option("--alpha", sim_opts.alpha_list, "Test levels")
      ->delimiter(',')
      ->capture_default_str();
  sim_cmd->add_option("--R", sim_opts.R, "Model repetitions per cell")
      ->capture_default_str();
  sim_cmd->add_option("--k", sim_opts.k, "Grid points per curve")->capture_default_str();
  sim_cmd->add_flag("--null-density", sim_opts.null_density,
                    "Draw exact and bootstrap null statistics instead of a table");
  sim_cmd->add_option("--n-datasets", sim_opts.n_datasets,
                      "Datasets given a full bootstrap pass in --null-density mode")
      ->capture_default_str();
  add_common(sim_cmd, sim_opts.common, false);
  sim_cmd->add_option("--b", sim_opts.b_list, "Smoothing bandwidths")
      ->delimiter(',')
      ->capture_default_str();
  sim_cmd->callback([&] { run_simulate(sim_opts); });

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = expand_simulate_config(args, *sim_cmd);
    std::vector<const char*> cargs;
    cargs.reserve(args.size() + 1);
    cargs.push_back(argv[0]);
    for (const auto& a : args) cargs.push_back(a.c_str());
    app.parse(static_cast<int>(cargs.size()), cargs.data());
    return 0;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const specop::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const specop::ContractViolation& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const specop::ScopeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const specop::DegenerateStatisticError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
}
