#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "smbp/density.hpp"
#include "smbp/processes.hpp"

namespace smbp {

/// sum_b (estimate_b - truth_b)^2 / sum_b truth_b^2.
double rmsep(std::span<const double> estimates, std::span<const double> truths);

/// |estimate - truth| / |truth|.
double ape(double estimate, double truth);

/// Truths below this are left out of APE averages.
inline constexpr double kApeTruthFloor = 1e-6;

struct ExperimentConfig {
  ProcessSpec process = SineProcess{};
  std::vector<std::size_t> sample_sizes{200};
  std::vector<std::size_t> d_values{1};
  std::size_t replications = 200;
  std::uint64_t seed = 0;
  std::vector<double> b_values;  // empty means default_b_values(process)
  std::size_t grid_points = 100;
  KernelFamily kernel = KernelFamily::Gaussian;
  BandwidthRule bandwidth = NormalScaleRule{};
};

void validate(const ExperimentConfig& config);

std::vector<double> resolved_b_values(const ExperimentConfig& config);

/// Stable text form of every field that influences the output.
std::string canonical_config(const ExperimentConfig& config);

/// FNV-1a of canonical_config, 16 lowercase hex digits.
std::string config_hash(const ExperimentConfig& config);

/// Short process label used in output tables (distribution name for the sine process).
std::string process_label(const ProcessSpec& spec);

struct ReplicationOutcome {
  std::vector<double> rmsep;             // one per d value
  std::vector<std::vector<double>> ape;  // [d][b], NaN where excluded
};

/// One replication at sample size n. The sample is drawn from Rng(seed, rep_index),
/// so every sample size and every d share the same underlying draws.
ReplicationOutcome run_replication(const ExperimentConfig& config, std::size_t n,
                                   std::size_t rep_index);

struct CellSummary {
  std::size_t n = 0;
  std::size_t d = 0;
  double mean_rmsep = 0.0;
  double std_rmsep = 0.0;
  std::vector<double> mean_ape;  // per b, NaN where excluded
};

struct ExperimentResult {
  std::string label;
  std::string hash;
  std::uint64_t seed = 0;
  std::size_t replications = 0;
  std::vector<double> b_values;
  std::vector<CellSummary> cells;  // ordered by n, then d

  const CellSummary& cell(std::size_t n, std::size_t d) const;
};

/// Replications run on up to `threads` workers; results are combined in
/// rep_index order so the output does not depend on the worker count.
ExperimentResult run_experiment(const ExperimentConfig& config, std::size_t threads = 1);

/// dist,n,mean,std for the first d value of each result.
void write_table1_csv(std::ostream& out, std::span<const ExperimentResult> results);

/// dist,n,d,mean,std.
void write_table2_csv(std::ostream& out, std::span<const ExperimentResult> results);

/// dist,n,d,b,mean_ape.
void write_ape_csv(std::ostream& out, std::span<const ExperimentResult> results);

}  // namespace smbp
