#include "smbp/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "smbp/csv.hpp"
#include "smbp/error.hpp"

namespace smbp {

namespace {

// Lower incomplete gamma function by its power series; used only with small x.
double lower_incomplete_gamma(double s, double x) {
  double term = 1.0 / s;
  double sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= x / (s + k);
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return std::exp(s * std::log(x) - x) * sum;
}

}  // namespace

std::string to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::Epanechnikov: return "epanechnikov";
    case KernelFamily::TruncatedGaussian: return "truncated_gaussian";
    case KernelFamily::Gaussian: return "gaussian";
  }
  return "unknown";
}

KernelFamily parse_kernel_family(const std::string& name) {
  if (name == "epanechnikov" || name == "epanechnikov-radial") return KernelFamily::Epanechnikov;
  if (name == "truncated_gaussian" || name == "truncated-gaussian-radial") {
    return KernelFamily::TruncatedGaussian;
  }
  if (name == "gaussian" || name == "gaussian-radial") return KernelFamily::Gaussian;
  throw InvalidArgument("unknown kernel family '" + name + "'");
}

double unit_sphere_area(std::size_t d) {
  const double half = 0.5 * static_cast<double>(d);
  return 2.0 * std::exp(half * std::log(std::numbers::pi) - std::lgamma(half));
}

KernelSpec::KernelSpec(KernelFamily family, std::size_t dimension)
    : family_(family), dimension_(dimension), normalization_(1.0) {
  if (dimension == 0) throw InvalidArgument("kernel dimension must be at least 1");
  const double d = static_cast<double>(dimension);
  switch (family) {
    case KernelFamily::Epanechnikov:
      normalization_ = unit_sphere_area(dimension) * 2.0 / (d * (d + 2.0));
      break;
    case KernelFamily::TruncatedGaussian:
      // int_0^1 exp(-r^2/2) r^{d-1} dr = 2^{d/2-1} gamma(d/2, 1/2)
      normalization_ = unit_sphere_area(dimension) * std::pow(2.0, 0.5 * d - 1.0) *
                       lower_incomplete_gamma(0.5 * d, 0.5);
      break;
    case KernelFamily::Gaussian:
      normalization_ = std::pow(2.0 * std::numbers::pi, 0.5 * d);
      break;
  }
}

double KernelSpec::profile(double r) const {
  if (!(r >= 0.0)) throw InvalidArgument("kernel radius must be nonnegative");
  switch (family_) {
    case KernelFamily::Epanechnikov:
      return r <= 1.0 ? (1.0 - r * r) / normalization_ : 0.0;
    case KernelFamily::TruncatedGaussian:
      return r <= 1.0 ? std::exp(-0.5 * r * r) / normalization_ : 0.0;
    case KernelFamily::Gaussian:
      return std::exp(-0.5 * r * r) / normalization_;
  }
  return 0.0;
}

double kernel_profile(const KernelSpec& spec, double r) { return spec.profile(r); }

double bandwidth_rate(std::size_t n, std::size_t d, double p, double c) {
  if (n == 0 || d == 0) throw InvalidArgument("bandwidth rate needs n >= 1 and d >= 1");
  if (!(p >= 2.0)) throw InvalidArgument("smoothness order p must be at least 2");
  if (!(c > 0.0)) throw InvalidArgument("bandwidth constant must be positive");
  return c * std::pow(static_cast<double>(n), -1.0 / (2.0 * p + static_cast<double>(d)));
}

double pooled_score_scale(const ScoreMatrix& scores) {
  const std::size_t n = scores.rows();
  const std::size_t d = scores.dimension();
  if (n < 2) throw InvalidArgument("bandwidth selection needs at least two scores");
  double pooled = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += scores(i, j);
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) ss += (scores(i, j) - mean) * (scores(i, j) - mean);
    pooled += ss / static_cast<double>(n - 1);
  }
  pooled /= static_cast<double>(d);
  if (!(pooled > 0.0)) throw InvalidArgument("scores have zero variance; bandwidth undefined");
  return std::sqrt(pooled);
}

double bandwidth_normal_scale(const ScoreMatrix& scores) {
  const double sigma = pooled_score_scale(scores);
  const double d = static_cast<double>(scores.dimension());
  const double n = static_cast<double>(scores.rows());
  return sigma * std::pow(4.0 / ((d + 2.0) * n), 1.0 / (d + 4.0));
}

std::string to_string(const BandwidthRule& rule) {
  struct Visitor {
    std::string operator()(const NormalScaleRule&) const { return "normal_scale"; }
    std::string operator()(const RateRule& r) const {
      std::string s = "rate";
      if (r.smoothness) s += ":p=" + format_double(*r.smoothness);
      if (r.constant) s += ":c=" + format_double(*r.constant);
      return s;
    }
    std::string operator()(const FixedBandwidth& f) const { return "fixed:" + format_double(f.h); }
  };
  return std::visit(Visitor{}, rule);
}

BandwidthRule parse_bandwidth_rule(const std::string& text) {
  if (text == "normal_scale" || text == "normal-scale") return NormalScaleRule{};
  if (text.rfind("fixed:", 0) == 0) {
    const double h = parse_double(std::string_view(text).substr(6), 0);
    if (!(h > 0.0)) throw InvalidArgument("fixed bandwidth must be positive");
    return FixedBandwidth{h};
  }
  if (text == "rate" || text.rfind("rate:", 0) == 0) {
    RateRule rule;
    std::string_view rest = std::string_view(text).substr(4);
    while (!rest.empty()) {
      rest.remove_prefix(1);
      const auto end = rest.find(':');
      const std::string_view part = rest.substr(0, end);
      rest = end == std::string_view::npos ? std::string_view{} : rest.substr(end);
      if (part.rfind("p=", 0) == 0) {
        rule.smoothness = parse_double(part.substr(2), 0);
      } else if (part.rfind("c=", 0) == 0) {
        rule.constant = parse_double(part.substr(2), 0);
      } else {
        throw InvalidArgument("unknown rate bandwidth option '" + std::string(part) + "'");
      }
    }
    return rule;
  }
  throw InvalidArgument("unknown bandwidth rule '" + text + "'");
}

double select_bandwidth(const BandwidthRule& rule, const ScoreMatrix& scores) {
  struct Visitor {
    const ScoreMatrix& scores;
    double operator()(const NormalScaleRule&) const { return bandwidth_normal_scale(scores); }
    double operator()(const RateRule& r) const {
      const double d = static_cast<double>(scores.dimension());
      const double p = r.smoothness.value_or(std::floor(std::max(2.0, 1.5 * d)) + 1.0);
      const double c = r.constant ? *r.constant : pooled_score_scale(scores);
      return bandwidth_rate(scores.rows(), scores.dimension(), p, c);
    }
    double operator()(const FixedBandwidth& f) const {
      if (!(f.h > 0.0)) throw InvalidArgument("bandwidth must be positive");
      return f.h;
    }
  };
  return std::visit(Visitor{scores}, rule);
}

DensityEstimator::DensityEstimator(ScoreMatrix scores, double bandwidth, KernelSpec kernel)
    : scores_(std::move(scores)), bandwidth_(bandwidth), kernel_(kernel) {
  if (!(bandwidth_ > 0.0) || !std::isfinite(bandwidth_)) {
    throw InvalidArgument("bandwidth must be positive");
  }
  if (scores_.rows() == 0) throw InvalidArgument("density estimator needs at least one score");
  if (kernel_.dimension() != scores_.dimension()) {
    throw InvalidArgument("kernel dimension differs from score dimension");
  }
}

double DensityEstimator::evaluate(std::span<const double> point) const {
  const std::size_t d = dimension();
  if (point.size() != d) {
    throw InvalidArgument("evaluation point has dimension " + std::to_string(point.size()) +
                          ", estimator has " + std::to_string(d));
  }
  const double inv_h = 1.0 / bandwidth_;
  const double cutoff = kernel_.compact() ? 1.0 : std::numeric_limits<double>::infinity();
  double acc = 0.0;
  for (std::size_t i = 0; i < scores_.rows(); ++i) {
    auto s = scores_.row(i);
    double r2 = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double diff = (s[j] - point[j]) * inv_h;
      r2 += diff * diff;
    }
    if (r2 > cutoff) continue;
    acc += kernel_.profile(std::sqrt(r2));
  }
  return acc / (static_cast<double>(scores_.rows()) * std::pow(bandwidth_, static_cast<double>(d)));
}

double kde_evaluate(const DensityEstimator& est, std::span<const double> point) {
  return est.evaluate(point);
}

SurrogateDensity estimate_density_on_basis(const FunctionalSample& sample, const Curve& center,
                                           std::span<const Curve> basis,
                                           const FunctionalSample& targets, KernelFamily family,
                                           const BandwidthRule& rule) {
  const std::size_t d = basis.size();
  if (d == 0) throw InvalidArgument("density estimation needs d >= 1");
  if (sample.size() < 2) throw InvalidArgument("density estimation needs at least two curves");
  if (!same_grid(sample.grid_ptr(), center.grid_ptr()) ||
      !same_grid(sample.grid_ptr(), targets.grid_ptr())) {
    throw GridMismatch();
  }
  for (const Curve& b : basis) {
    if (!same_grid(sample.grid_ptr(), b.grid_ptr())) throw GridMismatch();
  }

  ScoreMatrix sample_scores(sample.size(), d);
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const auto theta = project(sample.row(i), center, basis);
    for (std::size_t j = 0; j < d; ++j) sample_scores(i, j) = theta[j];
  }

  SurrogateDensity out;
  out.bandwidth = select_bandwidth(rule, sample_scores);
  const DensityEstimator est(std::move(sample_scores), out.bandwidth, KernelSpec(family, d));

  out.projected = Matrix(targets.size(), d);
  out.values.resize(targets.size());
  for (std::size_t m = 0; m < targets.size(); ++m) {
    const auto point = project(targets.row(m), center, basis);
    for (std::size_t j = 0; j < d; ++j) out.projected(m, j) = point[j];
    out.values[m] = est.evaluate(point);
  }
  return out;
}

SurrogateDensity estimate_surrogate_density(const FunctionalSample& sample,
                                            const EigenSystem& sys,
                                            const FunctionalSample& targets, std::size_t d,
                                            KernelFamily family, const BandwidthRule& rule) {
  if (d == 0 || d > sys.size()) {
    throw InvalidArgument("requested dimension " + std::to_string(d) + " but only " +
                          std::to_string(sys.size()) + " eigenfunctions are available");
  }
  return estimate_density_on_basis(sample, sys.mean(),
                                   std::span<const Curve>(sys.eigenfunctions().data(), d),
                                   targets, family, rule);
}

SurrogateDensity estimate_surrogate_density(const FunctionalSample& sample,
                                            const FunctionalSample& targets, std::size_t d,
                                            KernelFamily family, const BandwidthRule& rule) {
  if (sample.size() < 2) throw InvalidArgument("density estimation needs at least two curves");
  return estimate_surrogate_density(sample, fpca(sample), targets, d, family, rule);
}

void write_density_csv(std::ostream& out, const SurrogateDensity& density) {
  out << "x_id";
  for (std::size_t j = 0; j < density.projected.cols(); ++j) out << ",score_" << (j + 1);
  out << ",f_hat\n";
  for (std::size_t m = 0; m < density.values.size(); ++m) {
    out << m;
    for (double v : density.projected.row(m)) out << ',' << format_double(v);
    out << ',' << format_double(density.values[m]) << '\n';
  }
}

}  // namespace smbp
