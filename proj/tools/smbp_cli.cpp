#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "run_config.hpp"
#include "smbp/csv.hpp"
#include "smbp/density.hpp"
#include "smbp/error.hpp"
#include "smbp/experiments.hpp"
#include "smbp/factorization.hpp"
#include "smbp/fpca.hpp"
#include "smbp/processes.hpp"
#include "smbp/random.hpp"

namespace fs = std::filesystem;
using namespace smbp;

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Collects the files of one run and writes them plus manifest.json under `dir`.
class Output {
 public:
  Output(std::string subcommand, fs::path dir) : dir_(std::move(dir)) {
    manifest_["subcommand"] = std::move(subcommand);
    manifest_["version"] = "0.1.0";
    manifest_["started"] = utc_now();
    manifest_["output_dir"] = dir_.string();
    manifest_["files"] = nlohmann::ordered_json::array();
  }

  nlohmann::ordered_json& manifest() { return manifest_; }

  void add(const std::string& name, const std::string& content) {
    fs::create_directories(dir_);
    write_file_atomic(dir_ / name, content);
    manifest_["files"].push_back({{"name", name}, {"fnv1a64", hex64(fnv1a64(content))}});
  }

  void finish() {
    manifest_["finished"] = utc_now();
    fs::create_directories(dir_);
    write_file_atomic(dir_ / "manifest.json", manifest_.dump(2) + "\n");
  }

 private:
  fs::path dir_;
  nlohmann::ordered_json manifest_;
};

template <class Fn>
std::string render(Fn&& fn) {
  std::ostringstream os;
  fn(os);
  return os.str();
}

struct Options {
  std::string config;
  std::uint64_t seed = 0;
  std::string out = ".";
  std::size_t threads = 1;
  std::size_t replications = 0;
  std::string kernel;
  std::string bandwidth;
  std::string input;
  std::string targets;
  std::size_t d = 0;
  double fev = 0.0;
  std::vector<double> eps;
  std::size_t truncation = 0;
};

KernelFamily kernel_or(const Options& o, const cli::RunConfig* cfg, KernelFamily fallback) {
  if (!o.kernel.empty()) return parse_kernel_family(o.kernel);
  if (cfg && cfg->kernel) return *cfg->kernel;
  return fallback;
}

BandwidthRule bandwidth_or(const Options& o, const cli::RunConfig* cfg, BandwidthRule fallback) {
  if (!o.bandwidth.empty()) return parse_bandwidth_rule(o.bandwidth);
  if (cfg && cfg->bandwidth) return *cfg->bandwidth;
  return fallback;
}

void cmd_simulate(const Options& o) {
  const cli::RunConfig cfg = cli::read_run_config(o.config);
  if (cfg.processes.size() != 1) throw InvalidArgument("simulate needs exactly one process");
  if (cfg.sample_sizes.size() != 1) throw InvalidArgument("simulate needs exactly one n");
  const ProcessSpec& spec = cfg.processes.front();
  const GridPtr grid = default_grid(spec, cfg.grid_points);
  Rng rng(o.seed);
  const FunctionalSample sample = simulate(spec, cfg.sample_sizes.front(), grid, rng);
  const auto b = cfg.b_values.empty() ? default_b_values(spec) : cfg.b_values;

  Output out("simulate", o.out);
  out.manifest()["config"] = o.config;
  out.manifest()["seed"] = o.seed;
  out.manifest()["process"] = describe(spec);
  out.add("sample.csv", render([&](std::ostream& os) { write_sample_csv(os, sample); }));
  out.add("targets.csv", render([&](std::ostream& os) {
            write_sample_csv(os, target_curves(spec, grid, b));
          }));
  out.finish();
}

void cmd_fpca(const Options& o) {
  const FunctionalSample sample = read_sample_csv(fs::path(o.input));
  const EigenSystem sys = fpca(sample);
  std::size_t d = o.d;
  if (o.fev > 0.0) d = select_dimension_fev(sys.eigenvalues(), o.fev);
  if (d == 0) throw InvalidArgument("give --d or --fev");

  Output out("fpca", o.out);
  out.manifest()["input"] = o.input;
  out.manifest()["d"] = d;
  out.add("eigensystem.csv", render([&](std::ostream& os) { write_eigensystem_csv(os, sys); }));
  out.add("scores.csv",
          render([&](std::ostream& os) { write_scores_csv(os, scores(sample, sys, d)); }));
  out.finish();
}

void cmd_density(const Options& o) {
  if (o.d == 0) throw InvalidArgument("--d is required");
  const FunctionalSample sample = read_sample_csv(fs::path(o.input));
  FunctionalSample targets = read_sample_csv(fs::path(o.targets));
  if (!same_grid(sample.grid_ptr(), targets.grid_ptr())) throw GridMismatch();
  targets = FunctionalSample(sample.grid_ptr(), targets.size(),
                             std::vector<double>(targets.data().begin(), targets.data().end()));
  const KernelFamily family = kernel_or(o, nullptr, KernelFamily::Gaussian);
  const BandwidthRule rule = bandwidth_or(o, nullptr, NormalScaleRule{});
  const SurrogateDensity est = estimate_surrogate_density(sample, targets, o.d, family, rule);

  Output out("density", o.out);
  out.manifest()["input"] = o.input;
  out.manifest()["targets"] = o.targets;
  out.manifest()["d"] = o.d;
  out.manifest()["kernel"] = to_string(family);
  out.manifest()["bandwidth_rule"] = to_string(rule);
  out.manifest()["bandwidth"] = est.bandwidth;
  out.add("density.csv", render([&](std::ostream& os) { write_density_csv(os, est); }));
  out.finish();
}

void cmd_smbp(const Options& o) {
  if (o.d == 0) throw InvalidArgument("--d is required");
  if (o.eps.empty()) throw InvalidArgument("--eps is required");
  const FunctionalSample sample = read_sample_csv(fs::path(o.input));
  const FunctionalSample targets = read_sample_csv(fs::path(o.targets));
  if (!same_grid(sample.grid_ptr(), targets.grid_ptr())) throw GridMismatch();
  const EigenSystem sys = fpca(sample);
  const std::size_t truncation = o.truncation ? o.truncation : std::min(sys.size(), o.d + 10);
  const KernelFamily family = kernel_or(o, nullptr, KernelFamily::Gaussian);
  const BandwidthRule rule = bandwidth_or(o, nullptr, NormalScaleRule{});
  const FunctionalSample x(sample.grid_ptr(), 1,
                           std::vector<double>(targets.row(0).begin(), targets.row(0).end()));
  const SurrogateDensity est = estimate_surrogate_density(sample, sys, x, o.d, family, rule);

  auto reports = nlohmann::ordered_json::array();
  for (double eps : o.eps) {
    const FactorizationReport report =
        factorize(sample, x.curve(0), eps, o.d, sys, est.values.front(), truncation);
    reports.push_back(nlohmann::ordered_json::parse(to_json(report)));
  }

  Output out("smbp", o.out);
  out.manifest()["input"] = o.input;
  out.manifest()["target"] = o.targets;
  out.manifest()["d"] = o.d;
  out.manifest()["J"] = truncation;
  out.manifest()["kernel"] = to_string(family);
  out.manifest()["bandwidth_rule"] = to_string(rule);
  out.add("factorization.json", reports.dump(2) + "\n");
  out.finish();
}

void cmd_experiment(const Options& o) {
  const cli::RunConfig cfg = cli::read_run_config(o.config);
  auto configs = cli::experiment_configs(cfg, o.seed);
  for (auto& c : configs) {
    if (o.replications) c.replications = o.replications;
    c.kernel = kernel_or(o, &cfg, c.kernel);
    c.bandwidth = bandwidth_or(o, &cfg, c.bandwidth);
    validate(c);
  }
  std::vector<ExperimentResult> results;
  for (const auto& c : configs) results.push_back(run_experiment(c, o.threads));

  Output out("experiment", o.out);
  out.manifest()["config"] = o.config;
  out.manifest()["seed"] = o.seed;
  auto& runs = out.manifest()["runs"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < configs.size(); ++i) {
    runs.push_back({{"process", describe(configs[i].process)},
                    {"config_hash", results[i].hash},
                    {"replications", configs[i].replications},
                    {"kernel", to_string(configs[i].kernel)},
                    {"bandwidth", to_string(configs[i].bandwidth)}});
  }
  out.add("table1.csv", render([&](std::ostream& os) { write_table1_csv(os, results); }));
  out.add("table2.csv", render([&](std::ostream& os) { write_table2_csv(os, results); }));
  out.add("ape.csv", render([&](std::ostream& os) { write_ape_csv(os, results); }));
  out.finish();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Small-ball probability estimation for functional data"};
  app.require_subcommand(1);
  Options o;

  auto* sim = app.add_subcommand("simulate", "Draw a sample and its target curves");
  sim->add_option("--config", o.config, "key=value config file")->required()->check(CLI::ExistingFile);
  sim->add_option("--seed", o.seed, "RNG seed")->required();
  sim->add_option("--out", o.out, "Output directory");

  auto* fp = app.add_subcommand("fpca", "Functional principal components of a sample");
  fp->add_option("--input", o.input, "Sample CSV")->required()->check(CLI::ExistingFile);
  fp->add_option("--d", o.d, "Number of score columns");
  fp->add_option("--fev", o.fev, "Choose d as the smallest reaching this FEV");
  fp->add_option("--out", o.out, "Output directory");

  auto* de = app.add_subcommand("density", "Surrogate density at target curves");
  de->add_option("--input", o.input, "Sample CSV")->required()->check(CLI::ExistingFile);
  de->add_option("--targets", o.targets, "Target curves CSV")->required()->check(CLI::ExistingFile);
  de->add_option("--d", o.d, "Dimension")->required();
  de->add_option("--kernel", o.kernel, "epanechnikov | truncated_gaussian | gaussian");
  de->add_option("--bandwidth", o.bandwidth, "normal_scale | rate[:p=P][:c=C] | fixed:H");
  de->add_option("--out", o.out, "Output directory");

  auto* sm = app.add_subcommand("smbp", "Factorized small-ball probability at a target curve");
  sm->add_option("--input", o.input, "Sample CSV")->required()->check(CLI::ExistingFile);
  sm->add_option("--target", o.targets, "CSV whose first curve is the center")
      ->required()
      ->check(CLI::ExistingFile);
  sm->add_option("--eps", o.eps, "Radii")->required()->delimiter(',');
  sm->add_option("--d", o.d, "Dimension")->required();
  sm->add_option("--J", o.truncation, "Truncation for the correction factor");
  sm->add_option("--kernel", o.kernel, "Kernel family");
  sm->add_option("--bandwidth", o.bandwidth, "Bandwidth rule");
  sm->add_option("--out", o.out, "Output directory");

  auto* ex = app.add_subcommand("experiment", "Monte Carlo RMSEP/APE study");
  ex->add_option("--config", o.config, "key=value config file")->required()->check(CLI::ExistingFile);
  ex->add_option("--seed", o.seed, "RNG seed")->required();
  ex->add_option("--out", o.out, "Output directory");
  ex->add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);
  ex->add_option("--replications", o.replications, "Override the replication count")
      ->check(CLI::PositiveNumber);
  ex->add_option("--kernel", o.kernel, "Kernel family");
  ex->add_option("--bandwidth", o.bandwidth, "Bandwidth rule");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*sim) cmd_simulate(o);
    if (*fp) cmd_fpca(o);
    if (*de) cmd_density(o);
    if (*sm) cmd_smbp(o);
    if (*ex) cmd_experiment(o);
  } catch (const std::exception& e) {
    std::cerr << "smbp: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
