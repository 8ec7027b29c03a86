#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "smbp/fpca.hpp"
#include "smbp/grid.hpp"

namespace smbp {

enum class KernelFamily {
  Epanechnikov,       // (1 - r^2) on the unit ball
  TruncatedGaussian,  // exp(-r^2/2) on the unit ball
  Gaussian,           // exp(-r^2/2) on R^d, not compactly supported
};

std::string to_string(KernelFamily family);
KernelFamily parse_kernel_family(const std::string& name);

/// A radial kernel in dimension d, normalized to integrate to one over R^d.
class KernelSpec {
 public:
  KernelSpec(KernelFamily family, std::size_t dimension);

  KernelFamily family() const noexcept { return family_; }
  std::size_t dimension() const noexcept { return dimension_; }
  bool compact() const noexcept { return family_ != KernelFamily::Gaussian; }

  /// omega_{d-1} * int_0^1 shape(r) r^{d-1} dr for compact families.
  double normalization() const noexcept { return normalization_; }

  double profile(double r) const;

 private:
  KernelFamily family_;
  std::size_t dimension_;
  double normalization_;
};

/// Surface area of the unit sphere in R^d, 2 pi^{d/2} / Gamma(d/2).
double unit_sphere_area(std::size_t d);

double kernel_profile(const KernelSpec& spec, double r);

/// c n^{-1/(2p + d)}; p >= 2 is the smoothness order of the target density.
double bandwidth_rate(std::size_t n, std::size_t d, double p, double c);

/// sigma (4 / ((d + 2) n))^{1/(d+4)} with sigma^2 the mean per-coordinate variance.
double bandwidth_normal_scale(const ScoreMatrix& scores);

/// sqrt of the mean of the per-coordinate sample variances.
double pooled_score_scale(const ScoreMatrix& scores);

struct NormalScaleRule {};

/// Rate-optimal bandwidth. Smoothness defaults to the smallest integer strictly
/// above max(2, 3d/2); the constant defaults to pooled_score_scale.
struct RateRule {
  std::optional<double> smoothness;
  std::optional<double> constant;
};

struct FixedBandwidth {
  double h;
};

using BandwidthRule = std::variant<NormalScaleRule, RateRule, FixedBandwidth>;

std::string to_string(const BandwidthRule& rule);

/// Inverse of to_string: "normal_scale", "rate[:p=P][:c=C]" or "fixed:H".
BandwidthRule parse_bandwidth_rule(const std::string& text);

double select_bandwidth(const BandwidthRule& rule, const ScoreMatrix& scores);

/// Radial kernel density estimate on d-dimensional scores with H = h^2 I.
class DensityEstimator {
 public:
  DensityEstimator(ScoreMatrix scores, double bandwidth, KernelSpec kernel);

  const ScoreMatrix& scores() const noexcept { return scores_; }
  double bandwidth() const noexcept { return bandwidth_; }
  const KernelSpec& kernel() const noexcept { return kernel_; }
  std::size_t dimension() const noexcept { return scores_.dimension(); }

  double evaluate(std::span<const double> point) const;

 private:
  ScoreMatrix scores_;
  double bandwidth_;
  KernelSpec kernel_;
};

/// (1 / (n h^d)) sum_i K(||score_i - point|| / h).
double kde_evaluate(const DensityEstimator& est, std::span<const double> point);

struct SurrogateDensity {
  Matrix projected;            // one row of d scores per evaluation curve
  std::vector<double> values;  // density estimate per evaluation curve
  double bandwidth = 0.0;
};

/// KDE of the sample projected on `basis` (after subtracting `center`),
/// evaluated at the equally projected rows of `targets`.
SurrogateDensity estimate_density_on_basis(const FunctionalSample& sample, const Curve& center,
                                           std::span<const Curve> basis,
                                           const FunctionalSample& targets, KernelFamily family,
                                           const BandwidthRule& rule);

/// FPCA of the sample, projection on the first d estimated eigenfunctions,
/// bandwidth selection and evaluation at each target curve.
SurrogateDensity estimate_surrogate_density(const FunctionalSample& sample,
                                            const FunctionalSample& targets, std::size_t d,
                                            KernelFamily family, const BandwidthRule& rule);

/// Same, reusing an existing eigensystem of `sample`.
SurrogateDensity estimate_surrogate_density(const FunctionalSample& sample,
                                            const EigenSystem& sys,
                                            const FunctionalSample& targets, std::size_t d,
                                            KernelFamily family, const BandwidthRule& rule);

/// Columns: x_id, score_1..score_d, f_hat.
void write_density_csv(std::ostream& out, const SurrogateDensity& density);

}  // namespace smbp
