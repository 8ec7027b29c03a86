#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "smbp/density.hpp"
#include "smbp/experiments.hpp"
#include "smbp/processes.hpp"

namespace smbp::cli {

// Flat key=value configuration. '#' starts a comment, lists are comma separated.
//
//   process      sine | wiener | gaussian_kl | exp_power_kl
//   dist         sine distributions, e.g. normal,chisq8,t5
//   terms        expansion length J of the KL processes (default 50)
//   lambdas      explicit eigenvalues for gaussian_kl / exp_power_kl
//   lambda_beta, lambda_alpha   lambda_j = exp(-beta j^alpha) instead of lambdas
//   q            exponential-power shape
//   n, d         sample sizes and dimensions
//   reps         replications
//   kernel       epanechnikov | truncated_gaussian | gaussian
//   bandwidth    normal_scale | rate[:p=P][:c=C] | fixed:H
//   eps          radii for the smbp subcommand
//   truncation   J used by the smbp subcommand
//   grid_points  discretization size (default 100)
//   b            target coefficients (default depends on the process)
struct RunConfig {
  std::vector<ProcessSpec> processes;
  std::vector<std::size_t> sample_sizes;
  std::vector<std::size_t> d_values;
  std::optional<std::size_t> replications;
  std::optional<KernelFamily> kernel;
  std::optional<BandwidthRule> bandwidth;
  std::vector<double> eps;
  std::optional<std::size_t> truncation;
  std::vector<double> b_values;
  std::size_t grid_points = 100;
};

RunConfig parse_run_config(std::istream& in);
RunConfig read_run_config(const std::filesystem::path& path);

/// One experiment per process in the config.
std::vector<ExperimentConfig> experiment_configs(const RunConfig& config, std::uint64_t seed);

}  // namespace smbp::cli
