#include "smbp/factorization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "json.hpp"
#include "smbp/csv.hpp"
#include "smbp/error.hpp"

namespace smbp {

namespace {

void require_positive_eps(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidArgument("eps must be positive");
}

double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

// Tail sums T(k) = sum_{j > k} lambda_j for k = 0..N (1-based k, entry N is 0).
std::vector<double> tail_sums(std::span<const double> lambdas) {
  std::vector<double> tail(lambdas.size() + 1, 0.0);
  for (std::size_t k = lambdas.size(); k-- > 0;) tail[k] = tail[k + 1] + lambdas[k];
  return tail;
}

// Allows for round-off when comparing ratios computed in log space.
constexpr double kLogSlack = 1e-12;

bool non_increasing(const std::vector<double>& values, std::size_t first, std::size_t last) {
  for (std::size_t i = first + 1; i <= last; ++i) {
    if (values[i] > values[i - 1] + kLogSlack) return false;
  }
  return true;
}

}  // namespace

double log_ball_volume(std::size_t d, double eps) {
  if (d == 0) throw InvalidArgument("ball dimension must be at least 1");
  require_positive_eps(eps);
  const double half = 0.5 * static_cast<double>(d);
  return static_cast<double>(d) * std::log(eps) + half * std::log(std::numbers::pi) -
         std::lgamma(half + 1.0);
}

double ball_volume(std::size_t d, double eps) { return std::exp(log_ball_volume(d, eps)); }

double tail_statistic(std::span<const double> x_tail, std::span<const double> theta_tail,
                      double eps) {
  require_positive_eps(eps);
  if (x_tail.size() != theta_tail.size()) {
    throw InvalidArgument("tail score vectors have different lengths");
  }
  double acc = 0.0;
  for (std::size_t j = 0; j < x_tail.size(); ++j) {
    const double diff = theta_tail[j] - x_tail[j];
    acc += diff * diff;
  }
  return acc / (eps * eps);
}

double correction_factor(const ScoreMatrix& sample_tail, std::span<const double> x_tail,
                         double eps, std::size_t d) {
  require_positive_eps(eps);
  if (sample_tail.rows() == 0) throw InvalidArgument("correction factor needs a sample");
  if (sample_tail.dimension() != x_tail.size()) {
    throw InvalidArgument("tail score vectors have different lengths");
  }
  const double power = 0.5 * static_cast<double>(d);
  double acc = 0.0;
  for (std::size_t i = 0; i < sample_tail.rows(); ++i) {
    const double s = tail_statistic(x_tail, sample_tail.row(i), eps);
    if (s < 1.0) acc += std::pow(1.0 - s, power);
  }
  return acc / static_cast<double>(sample_tail.rows());
}

std::string to_string(DecayRate rate) {
  switch (rate) {
    case DecayRate::Hyper: return "hyper-exponential";
    case DecayRate::Super: return "super-exponential";
    case DecayRate::Exponential: return "exponential";
    case DecayRate::Slower: return "slower";
  }
  return "unknown";
}

DecayClass classify_decay(std::span<const double> lambdas, std::size_t horizon,
                          const DecayThresholds& thresholds) {
  std::vector<double> logs(lambdas.size());
  for (std::size_t j = 0; j < lambdas.size(); ++j) {
    if (!(lambdas[j] > 0.0)) throw InvalidArgument("eigenvalues must be positive");
    logs[j] = std::log(lambdas[j]);
  }
  return classify_decay_log(logs, horizon, thresholds);
}

DecayClass classify_decay_log(std::span<const double> log_lambdas, std::size_t horizon,
                              const DecayThresholds& thresholds) {
  const std::size_t n = log_lambdas.size();
  if (horizon < 2) throw InvalidArgument("decay horizon must be at least 2");
  if (n < horizon + 10) {
    throw InvalidArgument("decay classification over horizon " + std::to_string(horizon) +
                          " needs at least " + std::to_string(horizon + 10) + " eigenvalues");
  }
  for (double v : log_lambdas) {
    if (!std::isfinite(v)) throw InvalidArgument("eigenvalues must be positive");
  }

  // log T(k) for 1-based k, T(k) = sum_{j=k+1}^{n} lambda_j.
  std::vector<double> log_tail(n + 1, -std::numeric_limits<double>::infinity());
  for (std::size_t k = n; k-- > 0;) log_tail[k] = log_add(log_tail[k + 1], log_lambdas[k]);

  DecayDiagnostics diag;
  diag.horizon = horizon;
  diag.thresholds = thresholds;
  diag.log_r_hyper.resize(horizon);
  diag.log_r_super.resize(horizon);
  diag.log_r_exp.resize(horizon);
  for (std::size_t d = 1; d <= horizon; ++d) {
    const double log_lambda_d = log_lambdas[d - 1];
    diag.log_r_exp[d - 1] = log_tail[d] - log_lambda_d;
    diag.log_r_hyper[d - 1] = std::log(static_cast<double>(d)) + diag.log_r_exp[d - 1];
    diag.log_r_super[d - 1] = log_lambdas[d] - log_lambda_d;
  }

  const std::size_t first = horizon - horizon / 2;  // 0-based
  const std::size_t last = horizon - 1;
  diag.window_begin = first + 1;

  diag.hyper_passed = non_increasing(diag.log_r_hyper, first, last) &&
                      diag.log_r_hyper[last] < std::log(thresholds.hyper_final_max);
  diag.super_passed = non_increasing(diag.log_r_super, first, last) &&
                      diag.log_r_super[last] <=
                          diag.log_r_super[first] + std::log1p(-thresholds.super_min_decline);
  const double max_exp =
      *std::max_element(diag.log_r_exp.begin() + static_cast<std::ptrdiff_t>(first),
                        diag.log_r_exp.end());
  diag.exponential_passed =
      max_exp < std::log(thresholds.exponential_bound) &&
      diag.log_r_exp[last] - diag.log_r_exp[first] <= std::log(thresholds.exponential_max_growth);

  DecayRate rate = DecayRate::Slower;
  if (diag.exponential_passed) {
    rate = DecayRate::Exponential;
    if (diag.super_passed) {
      rate = DecayRate::Super;
      if (diag.hyper_passed) rate = DecayRate::Hyper;
    }
  }
  return DecayClass{rate, std::move(diag)};
}

std::size_t select_dimension_prop1(std::span<const double> lambdas, double eps, double delta) {
  require_positive_eps(eps);
  if (!(delta > 0.0)) throw InvalidArgument("delta must be positive");
  for (double v : lambdas) {
    if (v < 0.0 || !std::isfinite(v)) throw InvalidArgument("eigenvalues must be nonnegative");
  }
  const auto tail = tail_sums(lambdas);
  const double target = std::pow(eps, 2.0 + delta);
  std::vector<NoAdmissibleDimension::Bound> scanned;
  for (std::size_t k = 1; k < lambdas.size(); ++k) {
    const double lhs = static_cast<double>(k) * tail[k];
    if (lhs <= target) return k;
    scanned.push_back({k, lhs, target});
  }
  throw NoAdmissibleDimension(
      "no k in the supplied spectrum satisfies k * tail <= eps^(2+delta); supply a longer "
      "sequence or a larger eps",
      std::move(scanned));
}

HyperDimension select_dimension_hyper(std::span<const double> lambdas, double eps,
                                      double delta1) {
  require_positive_eps(eps);
  if (!(delta1 > 0.0 && delta1 < 1.0)) throw InvalidArgument("delta1 must lie in (0, 1)");
  // Zeros are allowed so that spectra which underflow in their tail can be passed as is.
  for (double v : lambdas) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidArgument("eigenvalues must be nonnegative");
  }
  const auto tail = tail_sums(lambdas);
  const double eps2 = eps * eps;
  std::vector<NoAdmissibleDimension::Bound> scanned;
  for (std::size_t k = 1; k < lambdas.size(); ++k) {
    const double lambda_k = lambdas[k - 1];
    const double k_tail = static_cast<double>(k) * tail[k];
    if (lambda_k >= 1.0 || !(k_tail > 0.0)) {
      scanned.push_back({k, std::numeric_limits<double>::quiet_NaN(),
                         std::numeric_limits<double>::quiet_NaN()});
      continue;
    }
    const double lower = std::pow(k_tail, 1.0 - delta1);
    const double beta = 1.0 - (1.0 - delta1) * std::log(k_tail) / std::log(lambda_k);
    const double delta2 = 0.5 * (std::min(0.0, beta) + 1.0);
    const double upper = std::pow(lambda_k, 1.0 - delta2);
    if (lower <= eps2 && eps2 <= upper) return HyperDimension{k, delta2, lower, upper};
    scanned.push_back({k, lower, upper});
  }
  std::string msg = "no admissible d: eps^2 = " + format_double(eps2) +
                    " is outside [b(k), B(k)] for every scanned k";
  throw NoAdmissibleDimension(msg, std::move(scanned));
}

VolumeFactor volume_factor(double eps, std::size_t d, DecayRate rate,
                           std::optional<double> lambda_d) {
  require_positive_eps(eps);
  if (d == 0) throw InvalidArgument("volume factor dimension must be at least 1");
  if (rate == DecayRate::Hyper || rate == DecayRate::Slower) {
    throw InvalidArgument("volume_factor covers super-exponential and exponential decay; use "
                          "ball_volume for the " + to_string(rate) + " case");
  }
  const double dd = static_cast<double>(d);
  VolumeFactor out;
  out.log_value =
      0.5 * dd * (std::log(2.0 * std::numbers::pi * std::numbers::e * eps * eps) - std::log(dd));
  if (rate == DecayRate::Exponential && lambda_d) {
    if (!(*lambda_d > 0.0)) throw InvalidArgument("lambda_d must be positive");
    out.alpha = std::sqrt(eps * eps / *lambda_d);
  }
  return out;
}

double gaussian_intensity(std::span<const double> x_scores, std::span<const double> lambdas,
                          std::size_t d) {
  if (d > x_scores.size() || d > lambdas.size()) {
    throw InvalidArgument("intensity dimension exceeds the supplied scores");
  }
  double exponent = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    if (lambdas[j] < 0.0) throw InvalidArgument("eigenvalues must be nonnegative");
    if (lambdas[j] == 0.0) {
      if (x_scores[j] != 0.0) return 0.0;
      continue;
    }
    exponent += x_scores[j] * x_scores[j] / lambdas[j];
  }
  return std::exp(-0.5 * exponent);
}

double exp_power_intensity(std::span<const double> x_scores, std::span<const double> lambdas,
                           double q, std::size_t d) {
  if (!(q >= 2.0)) throw InvalidArgument("exponential-power intensity needs q >= 2");
  if (d > x_scores.size() || d > lambdas.size()) {
    throw InvalidArgument("intensity dimension exceeds the supplied scores");
  }
  double exponent = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    if (lambdas[j] < 0.0) throw InvalidArgument("eigenvalues must be nonnegative");
    if (lambdas[j] == 0.0) {
      if (x_scores[j] != 0.0) return 0.0;
      continue;
    }
    exponent += std::pow(std::abs(x_scores[j]) / std::sqrt(lambdas[j]), q);
  }
  return std::exp(-0.5 * exponent);
}

double wiener_intensity(const Curve& x) {
  const Grid& grid = x.grid();
  const std::size_t p = grid.size();
  if (p < 3) throw InvalidArgument("wiener_intensity needs at least three grid points");
  if (std::abs(grid.lower()) > 1e-12 || std::abs(grid.upper() - 1.0) > 1e-12) {
    throw InvalidArgument("wiener_intensity expects a grid on [0, 1]");
  }
  auto t = grid.points();
  auto v = x.values();
  // Derivative at t[at] of the parabola through nodes i, i+1, i+2.
  auto three_point = [&](std::size_t i, std::size_t at) {
    const double t0 = t[i], t1 = t[i + 1], t2 = t[i + 2], s = t[at];
    const double l0 = ((s - t1) + (s - t2)) / ((t0 - t1) * (t0 - t2));
    const double l1 = ((s - t0) + (s - t2)) / ((t1 - t0) * (t1 - t2));
    const double l2 = ((s - t0) + (s - t1)) / ((t2 - t0) * (t2 - t1));
    return l0 * v[i] + l1 * v[i + 1] + l2 * v[i + 2];
  };
  std::vector<double> squared(p);
  squared[0] = std::pow(three_point(0, 0), 2);
  squared[p - 1] = std::pow(three_point(p - 3, p - 1), 2);
  for (std::size_t k = 1; k + 1 < p; ++k) squared[k] = std::pow(three_point(k - 1, k), 2);
  double integral = 0.0;
  auto w = grid.weights();
  for (std::size_t k = 0; k < p; ++k) integral += w[k] * squared[k];
  return std::exp(-0.5 * integral);
}

std::size_t count_in_ball(const FunctionalSample& sample, const Curve& x, double eps) {
  if (!same_grid(sample.grid_ptr(), x.grid_ptr())) throw GridMismatch();
  if (!(eps >= 0.0)) throw InvalidArgument("eps must be nonnegative");
  auto w = sample.grid().weights();
  auto xv = x.values();
  std::size_t hits = 0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    auto r = sample.row(i);
    double acc = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
      const double diff = r[k] - xv[k];
      acc += w[k] * diff * diff;
    }
    if (std::sqrt(acc) <= eps) ++hits;
  }
  return hits;
}

double empirical_smbp(const FunctionalSample& sample, const Curve& x, double eps) {
  return static_cast<double>(count_in_ball(sample, x, eps)) /
         static_cast<double>(sample.size());
}

FactorizationReport factorize(const FunctionalSample& sample, const Curve& x, double eps,
                              std::size_t d, const EigenSystem& sys, double f_d_at_x,
                              std::size_t truncation) {
  require_positive_eps(eps);
  if (d == 0 || !(d < truncation) || truncation > sys.size()) {
    throw InvalidArgument("factorize needs 1 <= d < J <= number of eigenfunctions");
  }
  if (!(f_d_at_x >= 0.0)) throw InvalidArgument("density value must be nonnegative");

  const ScoreMatrix sample_scores = scores(sample, sys, truncation);
  const std::vector<double> x_scores = scores(x, sys, truncation);

  FactorizationReport report;
  report.x_scores.assign(x_scores.begin(), x_scores.begin() + static_cast<std::ptrdiff_t>(d));
  report.f_d_at_x = f_d_at_x;
  report.volume = ball_volume(d, eps);
  report.correction =
      correction_factor(sample_scores.columns(d, truncation - d),
                        std::span<const double>(x_scores).subspan(d), eps, d);
  report.phi_d = report.f_d_at_x * report.volume * report.correction;
  report.d = d;
  report.truncation = truncation;
  report.epsilon = eps;
  for (std::size_t j = truncation; j < sys.size(); ++j) {
    report.tail_mass_omitted += sys.eigenvalues()[j];
  }
  report.correction_vanished = report.correction == 0.0;
  return report;
}

std::string to_json(const FactorizationReport& report) {
  nlohmann::ordered_json j;
  j["d"] = report.d;
  j["eps"] = report.epsilon;
  j["f_d"] = report.f_d_at_x;
  j["volume"] = report.volume;
  j["correction"] = report.correction;
  j["phi_d"] = report.phi_d;
  j["tail_mass_omitted"] = report.tail_mass_omitted;
  j["J"] = report.truncation;
  j["x_scores"] = report.x_scores;
  j["correction_vanished"] = report.correction_vanished;
  return j.dump(2);
}

}  // namespace smbp
