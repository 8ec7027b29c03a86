#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "smbp/error.hpp"
#include "smbp/fpca.hpp"
#include "smbp/grid.hpp"

namespace smbp {

// ---------------------------------------------------------------------------
// Volumes and the truncation correction
// ---------------------------------------------------------------------------

/// Volume of the d-dimensional Euclidean ball of radius eps.
double ball_volume(std::size_t d, double eps);
double log_ball_volume(std::size_t d, double eps);

/// S = eps^{-2} sum_j (theta_j - x_j)^2 over the tail coordinates.
double tail_statistic(std::span<const double> x_tail, std::span<const double> theta_tail,
                      double eps);

/// Monte Carlo plug-in of E[(1 - S)^{d/2} 1{S < 1}], averaged over the rows of
/// `sample_tail` (n x (J - d) tail scores). Rows whose tails all vanish give
/// exactly 1. A zero result means eps is too small for the truncation level.
double correction_factor(const ScoreMatrix& sample_tail, std::span<const double> x_tail,
                         double eps, std::size_t d);

// ---------------------------------------------------------------------------
// Eigenvalue decay
// ---------------------------------------------------------------------------

enum class DecayRate { Hyper, Super, Exponential, Slower };

std::string to_string(DecayRate rate);

/// Finite-window stand-ins for the asymptotic decay conditions. The ratios are
/// evaluated for d = 1..horizon and judged on the last horizon/2 of them.
struct DecayThresholds {
  /// Hyper: d T(d) / lambda_d non-increasing over the window and below this at its end.
  double hyper_final_max = 0.1;
  /// Super: lambda_{d+1} / lambda_d non-increasing over the window and falling by at
  /// least this relative amount from the first to the last window point.
  double super_min_decline = 0.05;
  /// Exponential: T(d) / lambda_d stays below this bound on the window ...
  double exponential_bound = 100.0;
  /// ... and its last window value is at most this multiple of the first.
  double exponential_max_growth = 1.5;
};

struct DecayDiagnostics {
  std::size_t horizon = 0;
  std::size_t window_begin = 0;  // 1-based d at which the judged window starts
  DecayThresholds thresholds;
  // Ratios for d = 1..horizon; log values are exact, linear ones may underflow.
  std::vector<double> log_r_hyper;
  std::vector<double> log_r_super;
  std::vector<double> log_r_exp;
  bool hyper_passed = false;
  bool super_passed = false;
  bool exponential_passed = false;
};

struct DecayClass {
  DecayRate rate;
  DecayDiagnostics diagnostics;
};

/// Needs at least horizon + 10 terms; tail sums T(d) run to the end of the
/// supplied sequence, so slowly decaying spectra need long inputs.
DecayClass classify_decay(std::span<const double> lambdas, std::size_t horizon,
                          const DecayThresholds& thresholds = {});

/// Same on log-eigenvalues, for spectra such as exp(-j^2) that underflow.
DecayClass classify_decay_log(std::span<const double> log_lambdas, std::size_t horizon,
                              const DecayThresholds& thresholds = {});

// ---------------------------------------------------------------------------
// Choosing d(eps)
// ---------------------------------------------------------------------------

/// Raised when no truncation level in the supplied sequence satisfies a rule.
class NoAdmissibleDimension : public Error {
 public:
  struct Bound {
    std::size_t k;
    double lower;
    double upper;
  };

  NoAdmissibleDimension(const std::string& what, std::vector<Bound> scanned)
      : Error(what), scanned_(std::move(scanned)) {}

  const std::vector<Bound>& scanned() const noexcept { return scanned_; }

 private:
  std::vector<Bound> scanned_;
};

/// d = min{k : k sum_{j>k} lambda_j <= eps^{2 + delta}}, k ranging over the
/// supplied sequence with at least one tail term left.
std::size_t select_dimension_prop1(std::span<const double> lambdas, double eps, double delta);

struct HyperDimension {
  std::size_t d = 0;
  double delta2 = 0.0;
  double lower = 0.0;  // b(d) = (d T(d))^{1 - delta1}
  double upper = 0.0;  // B(d) = lambda_d^{1 - delta2}
};

/// d = min{k : b(k) <= eps^2 <= B(k)} with delta2 at the midpoint of
/// (min{0, beta(delta1)}, 1), beta = 1 - (1 - delta1) ln(k T(k)) / ln(lambda_k).
HyperDimension select_dimension_hyper(std::span<const double> lambdas, double eps,
                                      double delta1);

// ---------------------------------------------------------------------------
// Volume factors for slower-than-hyper decay
// ---------------------------------------------------------------------------

struct VolumeFactor {
  double log_value = 0.0;          // (d/2) [log(2 pi e eps^2) - log d]
  bool remainder_omitted = true;   // the o(1) / delta(d, alpha) term is not modelled
  std::optional<double> alpha;     // sqrt(eps^2 / lambda_d), exponential case only
};

VolumeFactor volume_factor(double eps, std::size_t d, DecayRate rate,
                           std::optional<double> lambda_d = std::nullopt);

// ---------------------------------------------------------------------------
// Closed-form intensities
// ---------------------------------------------------------------------------

/// exp{-1/2 sum_{j<=d} x_j^2 / lambda_j}. A zero eigenvalue paired with a
/// nonzero score puts x outside the RKHS and yields 0.
double gaussian_intensity(std::span<const double> x_scores, std::span<const double> lambdas,
                          std::size_t d);

/// exp{-1/2 sum_{j<=d} (|x_j| / sqrt(lambda_j))^q}, q >= 2.
double exp_power_intensity(std::span<const double> x_scores, std::span<const double> lambdas,
                           double q, std::size_t d);

/// exp{-1/2 int_0^1 x'(t)^2 dt} with three-point finite differences (central
/// inside, one-sided at the ends) and the trapezoidal rule.
double wiener_intensity(const Curve& x);

// ---------------------------------------------------------------------------
// Empirical small-ball probability and the assembled factorization
// ---------------------------------------------------------------------------

/// Fraction of sample curves with ||X_i - x|| <= eps.
double empirical_smbp(const FunctionalSample& sample, const Curve& x, double eps);

/// Number of sample curves inside the closed ball.
std::size_t count_in_ball(const FunctionalSample& sample, const Curve& x, double eps);

struct FactorizationReport {
  std::vector<double> x_scores;  // first d scores of x
  double f_d_at_x = 0.0;
  double volume = 0.0;
  double correction = 0.0;
  double phi_d = 0.0;            // f_d_at_x * volume * correction
  std::size_t d = 0;
  std::size_t truncation = 0;    // J
  double epsilon = 0.0;
  double tail_mass_omitted = 0.0;  // sum of estimated eigenvalues beyond J
  bool correction_vanished = false;
};

/// Projects sample and x onto the first J eigenfunctions, estimates the
/// correction over coordinates d+1..J, and multiplies the three factors.
FactorizationReport factorize(const FunctionalSample& sample, const Curve& x, double eps,
                              std::size_t d, const EigenSystem& sys, double f_d_at_x,
                              std::size_t truncation);

/// Keys: d, eps, f_d, volume, correction, phi_d, tail_mass_omitted.
std::string to_json(const FactorizationReport& report);

}  // namespace smbp
