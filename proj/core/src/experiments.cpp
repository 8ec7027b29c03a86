#include "smbp/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <ostream>
#include <thread>

#include "smbp/csv.hpp"
#include "smbp/error.hpp"
#include "smbp/fpca.hpp"
#include "smbp/random.hpp"

namespace smbp {

double rmsep(std::span<const double> estimates, std::span<const double> truths) {
  if (estimates.size() != truths.size()) {
    throw InvalidArgument("estimates and truths differ in length");
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < truths.size(); ++i) {
    const double diff = estimates[i] - truths[i];
    num += diff * diff;
    den += truths[i] * truths[i];
  }
  if (!(den > 0.0)) throw InvalidArgument("RMSEP is undefined for all-zero truths");
  return num / den;
}

double ape(double estimate, double truth) {
  if (truth == 0.0) throw InvalidArgument("APE is undefined for a zero truth");
  return std::abs(estimate - truth) / std::abs(truth);
}

void validate(const ExperimentConfig& config) {
  if (config.replications == 0) throw InvalidArgument("replications must be at least 1");
  if (config.sample_sizes.empty()) throw InvalidArgument("at least one sample size is required");
  for (std::size_t n : config.sample_sizes) {
    if (n < 2) throw InvalidArgument("sample sizes must be at least 2");
  }
  if (config.d_values.empty()) throw InvalidArgument("at least one dimension is required");
  for (std::size_t d : config.d_values) {
    if (d == 0) throw InvalidArgument("dimensions must be at least 1");
    if (d > config.grid_points) throw InvalidArgument("dimension exceeds the grid size");
  }
  if (config.grid_points < 2) throw InvalidArgument("grid needs at least 2 points");
  if (std::holds_alternative<SineProcess>(config.process)) {
    for (std::size_t d : config.d_values) {
      if (d != 1) throw InvalidArgument("the sine process has a single component");
    }
  }
}

std::vector<double> resolved_b_values(const ExperimentConfig& config) {
  return config.b_values.empty() ? default_b_values(config.process) : config.b_values;
}

std::string canonical_config(const ExperimentConfig& config) {
  std::string out = "process=" + describe(config.process);
  out += "\nn=";
  for (std::size_t i = 0; i < config.sample_sizes.size(); ++i) {
    out += (i ? "," : "") + std::to_string(config.sample_sizes[i]);
  }
  out += "\nd=";
  for (std::size_t i = 0; i < config.d_values.size(); ++i) {
    out += (i ? "," : "") + std::to_string(config.d_values[i]);
  }
  out += "\nreplications=" + std::to_string(config.replications);
  out += "\nseed=" + std::to_string(config.seed);
  out += "\nb=";
  const auto b = resolved_b_values(config);
  for (std::size_t i = 0; i < b.size(); ++i) out += (i ? "," : "") + format_double(b[i]);
  out += "\ngrid_points=" + std::to_string(config.grid_points);
  out += "\nkernel=" + to_string(config.kernel);
  out += "\nbandwidth=" + to_string(config.bandwidth);
  out += "\nrng=" + std::string(Rng::algorithm);
  out += '\n';
  return out;
}

std::string config_hash(const ExperimentConfig& config) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical_config(config))));
  return buf;
}

std::string process_label(const ProcessSpec& spec) {
  if (const auto* s = std::get_if<SineProcess>(&spec)) return to_string(s->dist);
  if (std::holds_alternative<WienerKL>(spec)) return "wiener";
  if (std::holds_alternative<GaussianKL>(spec)) return "gaussian_kl";
  return "exp_power_kl";
}

ReplicationOutcome run_replication(const ExperimentConfig& config, std::size_t n,
                                   std::size_t rep_index) {
  validate(config);
  const GridPtr grid = default_grid(config.process, config.grid_points);
  const auto b = resolved_b_values(config);
  const FunctionalSample targets = target_curves(config.process, grid, b);

  Rng rng(config.seed, rep_index);
  const FunctionalSample sample = simulate(config.process, n, grid, rng);
  const EigenSystem sys = fpca(sample);

  ReplicationOutcome out;
  out.rmsep.reserve(config.d_values.size());
  for (std::size_t d : config.d_values) {
    const SurrogateDensity est =
        estimate_surrogate_density(sample, sys, targets, d, config.kernel, config.bandwidth);
    std::vector<double> truth(b.size());
    std::vector<double> errors(b.size());
    for (std::size_t m = 0; m < b.size(); ++m) {
      truth[m] = true_surrogate_density(config.process, b[m], d);
      errors[m] = truth[m] < kApeTruthFloor ? std::numeric_limits<double>::quiet_NaN()
                                            : ape(est.values[m], truth[m]);
    }
    out.rmsep.push_back(rmsep(est.values, truth));
    out.ape.push_back(std::move(errors));
  }
  return out;
}

const CellSummary& ExperimentResult::cell(std::size_t n, std::size_t d) const {
  for (const auto& c : cells) {
    if (c.n == n && c.d == d) return c;
  }
  throw InvalidArgument("no result for n=" + std::to_string(n) + ", d=" + std::to_string(d));
}

namespace {

std::vector<ReplicationOutcome> run_all(const ExperimentConfig& config, std::size_t n,
                                        std::size_t threads) {
  const std::size_t reps = config.replications;
  std::vector<ReplicationOutcome> outcomes(reps);
  std::vector<std::exception_ptr> failures(reps);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t r = next++; r < reps; r = next++) {
      try {
        outcomes[r] = run_replication(config, n, r);
      } catch (...) {
        failures[r] = std::current_exception();
      }
    }
  };
  const std::size_t count = std::clamp<std::size_t>(threads, 1, reps);
  if (count == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(count);
    for (std::size_t t = 0; t < count; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (std::size_t r = 0; r < reps; ++r) {
    if (!failures[r]) continue;
    try {
      std::rethrow_exception(failures[r]);
    } catch (const std::exception& e) {
      throw Error("replication " + std::to_string(r) + " (n=" + std::to_string(n) +
                  ") failed: " + e.what());
    }
  }
  return outcomes;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config, std::size_t threads) {
  validate(config);
  ExperimentResult result;
  result.label = process_label(config.process);
  result.hash = config_hash(config);
  result.seed = config.seed;
  result.replications = config.replications;
  result.b_values = resolved_b_values(config);
  const std::size_t nb = result.b_values.size();
  const double reps = static_cast<double>(config.replications);

  for (std::size_t n : config.sample_sizes) {
    const auto outcomes = run_all(config, n, threads);
    for (std::size_t k = 0; k < config.d_values.size(); ++k) {
      CellSummary cell;
      cell.n = n;
      cell.d = config.d_values[k];
      double sum = 0.0;
      for (const auto& o : outcomes) sum += o.rmsep[k];
      cell.mean_rmsep = sum / reps;
      if (config.replications > 1) {
        double ss = 0.0;
        for (const auto& o : outcomes) ss += (o.rmsep[k] - cell.mean_rmsep) * (o.rmsep[k] - cell.mean_rmsep);
        cell.std_rmsep = std::sqrt(ss / (reps - 1.0));
      }
      cell.mean_ape.assign(nb, 0.0);
      for (const auto& o : outcomes) {
        for (std::size_t m = 0; m < nb; ++m) cell.mean_ape[m] += o.ape[k][m];
      }
      for (double& v : cell.mean_ape) v /= reps;
      result.cells.push_back(std::move(cell));
    }
  }
  return result;
}

void write_table1_csv(std::ostream& out, std::span<const ExperimentResult> results) {
  out << "dist,n,mean,std\n";
  for (const auto& r : results) {
    if (r.cells.empty()) continue;
    const std::size_t d = r.cells.front().d;
    for (const auto& c : r.cells) {
      if (c.d != d) continue;
      out << r.label << ',' << c.n << ',' << format_double(c.mean_rmsep) << ','
          << format_double(c.std_rmsep) << '\n';
    }
  }
}

void write_table2_csv(std::ostream& out, std::span<const ExperimentResult> results) {
  out << "dist,n,d,mean,std\n";
  for (const auto& r : results) {
    for (const auto& c : r.cells) {
      out << r.label << ',' << c.n << ',' << c.d << ',' << format_double(c.mean_rmsep) << ','
          << format_double(c.std_rmsep) << '\n';
    }
  }
}

void write_ape_csv(std::ostream& out, std::span<const ExperimentResult> results) {
  out << "dist,n,d,b,mean_ape\n";
  for (const auto& r : results) {
    for (const auto& c : r.cells) {
      for (std::size_t m = 0; m < r.b_values.size(); ++m) {
        out << r.label << ',' << c.n << ',' << c.d << ',' << format_double(r.b_values[m]) << ','
            << (std::isnan(c.mean_ape[m]) ? std::string("nan") : format_double(c.mean_ape[m]))
            << '\n';
      }
    }
  }
}

}  // namespace smbp
