#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "smbp/grid.hpp"
#include "smbp/random.hpp"

namespace smbp {

/// Zero-mean, unit-variance scalar laws for the one-dimensional sine process.
enum class ScalarDist {
  StdNormal,     // N(0, 1)
  StdStudentT5,  // t(5) / sqrt(5/3)
  StdChiSq8,     // (chi^2(8) - 8) / 4
};

std::string to_string(ScalarDist dist);
ScalarDist parse_scalar_dist(const std::string& name);

double draw_scalar(ScalarDist dist, Rng& rng);

/// Density of the standardized law at b.
double scalar_density(ScalarDist dist, double b);

/// Unit-variance exponential-power draw, density proportional to exp(-(|z|/s)^q).
double draw_exp_power(double q, Rng& rng);

/// Density of draw_exp_power's law.
double exp_power_density(double q, double z);

// ---------------------------------------------------------------------------

/// X(t) = a sqrt(2/pi) sin(t), a ~ dist.
struct SineProcess {
  ScalarDist dist = ScalarDist::StdNormal;
};

/// Wiener process through its Karhunen-Loeve expansion truncated at `terms`.
struct WienerKL {
  std::size_t terms = 50;
};

/// sum_{j<=terms} sqrt(lambda_j) zeta_j e_j with Gaussian zeta and the sine basis
/// e_j(t) = sqrt(2/L) sin(j pi (t - a) / L).
struct GaussianKL {
  std::vector<double> lambdas;
  std::size_t terms = 0;
};

/// As GaussianKL with unit-variance exponential-power coefficients.
struct ExpPowerKL {
  std::vector<double> lambdas;
  double q = 2.0;
  std::size_t terms = 0;
};

using ProcessSpec = std::variant<SineProcess, WienerKL, GaussianKL, ExpPowerKL>;

std::string describe(const ProcessSpec& spec);

/// 100 equispaced points on [0, pi] for the sine process, on [0, 1] otherwise.
GridPtr default_grid(const ProcessSpec& spec, std::size_t points = 100);

/// lambda_j = ((j - 0.5) pi)^{-2}, j = 1..count.
std::vector<double> wiener_eigenvalues(std::size_t count);

/// 1/2 - sum_{j<=terms} lambda_j, the variance dropped by truncation.
double wiener_truncation_mass(std::size_t terms);

/// Exponential-power sequence lambda_j = exp(-beta j^alpha), j = 1..count.
std::vector<double> power_exponential_eigenvalues(std::size_t count, double beta, double alpha);

/// True eigenvalues of the process (first `count`, zero-padded where the
/// process has fewer components).
std::vector<double> true_eigenvalues(const ProcessSpec& spec, std::size_t count);

/// First `count` true eigenfunctions on `grid`.
std::vector<Curve> true_eigenfunctions(const ProcessSpec& spec, const GridPtr& grid,
                                       std::size_t count);

FunctionalSample sample_sine(std::size_t n, const GridPtr& grid, ScalarDist dist, Rng& rng);
FunctionalSample sample_wiener(std::size_t n, const GridPtr& grid, std::size_t terms, Rng& rng);
FunctionalSample sample_gaussian_kl(std::size_t n, const GridPtr& grid,
                                    const std::vector<double>& lambdas, std::size_t terms,
                                    Rng& rng);
FunctionalSample sample_exp_power_kl(std::size_t n, const GridPtr& grid,
                                     const std::vector<double>& lambdas, double q,
                                     std::size_t terms, Rng& rng);

FunctionalSample simulate(const ProcessSpec& spec, std::size_t n, const GridPtr& grid, Rng& rng);

// ---------------------------------------------------------------------------

/// 160 equispaced values on [-4, 4], or [-2, 6] for the chi-square sine process.
std::vector<double> default_b_values(const ProcessSpec& spec);

/// x^b = b * sqrt(lambda_1) * e_1 for each b; for the sine process this is
/// b sqrt(2/pi) sin(t), for the Wiener process b (2 sqrt 2 / pi) sin(pi t / 2).
FunctionalSample target_curves(const ProcessSpec& spec, const GridPtr& grid,
                               const std::vector<double>& b_values);

/// Intensity of the small-ball probability at x^b.
double true_intensity(const ProcessSpec& spec, double b);

/// Joint density f_d of the first d principal components at the scores of x^b.
double true_surrogate_density(const ProcessSpec& spec, double b, std::size_t d);

}  // namespace smbp
