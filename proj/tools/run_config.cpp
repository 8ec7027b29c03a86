#include "run_config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <string>

#include "smbp/csv.hpp"
#include "smbp/error.hpp"

namespace smbp::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

struct Entry {
  std::string value;
  std::size_t line;
};

std::vector<double> parse_reals(const Entry& e) {
  std::vector<double> out;
  for (auto f : split_fields(e.value)) out.push_back(parse_double(trim(f), e.line));
  return out;
}

std::size_t parse_count(std::string_view text, std::size_t line) {
  text = trim(text);
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw ParseError(line, "expected a nonnegative integer, got '" + std::string(text) + "'");
  }
  return v;
}

std::vector<std::size_t> parse_counts(const Entry& e) {
  std::vector<std::size_t> out;
  for (auto f : split_fields(e.value)) out.push_back(parse_count(f, e.line));
  return out;
}

}  // namespace

RunConfig parse_run_config(std::istream& in) {
  static const std::vector<std::string> known = {
      "process", "dist", "terms", "lambdas", "lambda_beta", "lambda_alpha", "q", "n", "d",
      "reps", "kernel", "bandwidth", "eps", "truncation", "grid_points", "b"};

  std::map<std::string, Entry> entries;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view text = raw;
    if (auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
    text = trim(text);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) throw ParseError(line, "expected key=value");
    std::string key(trim(text.substr(0, eq)));
    std::string value(trim(text.substr(eq + 1)));
    if (key == "seed") {
      throw ParseError(line, "the seed is taken from --seed only");
    }
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ParseError(line, "unknown key '" + key + "'");
    }
    if (value.empty()) throw ParseError(line, "empty value for '" + key + "'");
    if (!entries.emplace(key, Entry{value, line}).second) {
      throw ParseError(line, "duplicate key '" + key + "'");
    }
  }

  auto get = [&](const std::string& key) -> const Entry* {
    auto it = entries.find(key);
    return it == entries.end() ? nullptr : &it->second;
  };

  RunConfig cfg;
  if (const Entry* e = get("grid_points")) cfg.grid_points = parse_count(e->value, e->line);
  if (const Entry* e = get("n")) cfg.sample_sizes = parse_counts(*e);
  if (const Entry* e = get("d")) cfg.d_values = parse_counts(*e);
  if (const Entry* e = get("reps")) cfg.replications = parse_count(e->value, e->line);
  if (const Entry* e = get("truncation")) cfg.truncation = parse_count(e->value, e->line);
  if (const Entry* e = get("eps")) cfg.eps = parse_reals(*e);
  if (const Entry* e = get("b")) cfg.b_values = parse_reals(*e);
  try {
    if (const Entry* e = get("kernel")) cfg.kernel = parse_kernel_family(e->value);
  } catch (const InvalidArgument& ex) {
    throw ParseError(get("kernel")->line, ex.what());
  }
  try {
    if (const Entry* e = get("bandwidth")) cfg.bandwidth = parse_bandwidth_rule(e->value);
  } catch (const Error& ex) {
    throw ParseError(get("bandwidth")->line, ex.what());
  }

  const Entry* process = get("process");
  const std::string kind = process ? process->value : "sine";
  const std::size_t process_line = process ? process->line : 0;
  std::size_t terms = 50;
  if (const Entry* e = get("terms")) terms = parse_count(e->value, e->line);

  auto lambdas = [&]() -> std::vector<double> {
    if (const Entry* e = get("lambdas")) {
      auto l = parse_reals(*e);
      if (!get("terms")) terms = l.size();
      return l;
    }
    const Entry* beta = get("lambda_beta");
    const Entry* alpha = get("lambda_alpha");
    if (!beta || !alpha) {
      throw ParseError(process_line, kind + " needs lambdas or lambda_beta and lambda_alpha");
    }
    return power_exponential_eigenvalues(terms, parse_double(beta->value, beta->line),
                                         parse_double(alpha->value, alpha->line));
  };

  if (kind == "sine") {
    std::vector<std::string> dists{"normal"};
    if (const Entry* e = get("dist")) {
      dists.clear();
      for (auto f : split_fields(e->value)) dists.emplace_back(trim(f));
    }
    for (const auto& name : dists) {
      try {
        cfg.processes.push_back(SineProcess{parse_scalar_dist(name)});
      } catch (const InvalidArgument& ex) {
        throw ParseError(get("dist")->line, ex.what());
      }
    }
  } else if (kind == "wiener") {
    cfg.processes.push_back(WienerKL{terms});
  } else if (kind == "gaussian_kl") {
    auto l = lambdas();
    cfg.processes.push_back(GaussianKL{std::move(l), terms});
  } else if (kind == "exp_power_kl") {
    const Entry* q = get("q");
    if (!q) throw ParseError(process_line, "exp_power_kl needs q");
    auto l = lambdas();
    cfg.processes.push_back(ExpPowerKL{std::move(l), parse_double(q->value, q->line), terms});
  } else {
    throw ParseError(process_line, "unknown process '" + kind + "'");
  }
  if (get("dist") && kind != "sine") throw ParseError(get("dist")->line, "dist applies to sine only");
  return cfg;
}

RunConfig read_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config '" + path.string() + "'");
  try {
    return parse_run_config(in);
  } catch (const ParseError& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

std::vector<ExperimentConfig> experiment_configs(const RunConfig& config, std::uint64_t seed) {
  std::vector<ExperimentConfig> out;
  for (const auto& process : config.processes) {
    ExperimentConfig e;
    e.process = process;
    if (!config.sample_sizes.empty()) e.sample_sizes = config.sample_sizes;
    if (!config.d_values.empty()) e.d_values = config.d_values;
    if (config.replications) e.replications = *config.replications;
    if (config.kernel) e.kernel = *config.kernel;
    if (config.bandwidth) e.bandwidth = *config.bandwidth;
    e.seed = seed;
    e.b_values = config.b_values;
    e.grid_points = config.grid_points;
    validate(e);
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace smbp::cli
