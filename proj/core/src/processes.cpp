#include "smbp/processes.hpp"

#include <cmath>
#include <numbers>

#include "smbp/csv.hpp"
#include "smbp/error.hpp"

namespace smbp {

namespace {

constexpr double kPi = std::numbers::pi;

double sum_of_squared_normals(std::size_t k, Rng& rng) {
  double acc = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double z = rng.normal();
    acc += z * z;
  }
  return acc;
}

double exp_power_scale(double q) {
  return std::exp(0.5 * (std::lgamma(1.0 / q) - std::lgamma(3.0 / q)));
}

void check_lambdas(const std::vector<double>& lambdas, std::size_t terms) {
  if (terms == 0) throw InvalidArgument("at least one expansion term is required");
  if (lambdas.size() < terms) throw InvalidArgument("fewer eigenvalues than expansion terms");
  for (std::size_t j = 0; j < terms; ++j) {
    if (!(lambdas[j] > 0.0)) throw InvalidArgument("eigenvalues must be positive");
    if (j > 0 && lambdas[j] > lambdas[j - 1]) {
      throw InvalidArgument("eigenvalues must be in descending order");
    }
  }
}

Curve sine_basis_function(const GridPtr& grid, std::size_t j) {
  const double a = grid->lower();
  const double len = grid->length();
  const double scale = std::sqrt(2.0 / len);
  std::vector<double> v(grid->size());
  auto t = grid->points();
  for (std::size_t k = 0; k < v.size(); ++k) {
    v[k] = scale * std::sin(static_cast<double>(j) * kPi * (t[k] - a) / len);
  }
  return Curve(grid, std::move(v));
}

Curve wiener_eigenfunction(const GridPtr& grid, std::size_t j) {
  std::vector<double> v(grid->size());
  auto t = grid->points();
  const double freq = (static_cast<double>(j) - 0.5) * kPi;
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = std::sqrt(2.0) * std::sin(freq * t[k]);
  return Curve(grid, std::move(v));
}

Curve sine_direction(const GridPtr& grid) {
  std::vector<double> v(grid->size());
  auto t = grid->points();
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = std::sqrt(2.0 / kPi) * std::sin(t[k]);
  return Curve(grid, std::move(v));
}

// Sum_j coefficient_j * sqrt(lambda_j) * basis_j for n draws of the coefficients.
template <class Draw>
FunctionalSample expand(std::size_t n, const GridPtr& grid, const std::vector<double>& lambdas,
                        const std::vector<Curve>& basis, Draw&& draw) {
  const std::size_t p = grid->size();
  const std::size_t terms = basis.size();
  std::vector<double> values(n * p, 0.0);
  std::vector<double> root(terms);
  for (std::size_t j = 0; j < terms; ++j) root[j] = std::sqrt(lambdas[j]);
  for (std::size_t i = 0; i < n; ++i) {
    double* row = values.data() + i * p;
    for (std::size_t j = 0; j < terms; ++j) {
      const double coef = root[j] * draw();
      auto e = basis[j].values();
      for (std::size_t k = 0; k < p; ++k) row[k] += coef * e[k];
    }
  }
  return FunctionalSample(grid, n, std::move(values));
}

std::vector<Curve> sine_basis(const GridPtr& grid, std::size_t count) {
  std::vector<Curve> basis;
  basis.reserve(count);
  for (std::size_t j = 1; j <= count; ++j) basis.push_back(sine_basis_function(grid, j));
  return basis;
}

std::vector<Curve> wiener_basis(const GridPtr& grid, std::size_t count) {
  std::vector<Curve> basis;
  basis.reserve(count);
  for (std::size_t j = 1; j <= count; ++j) basis.push_back(wiener_eigenfunction(grid, j));
  return basis;
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double gaussian_f_d(double b, std::span<const double> lambdas, std::size_t d) {
  double log_norm = 0.0;
  for (std::size_t j = 0; j < d; ++j) log_norm -= 0.5 * std::log(2.0 * kPi * lambdas[j]);
  return std::exp(log_norm - 0.5 * b * b);
}

}  // namespace

std::string to_string(ScalarDist dist) {
  switch (dist) {
    case ScalarDist::StdNormal: return "normal";
    case ScalarDist::StdStudentT5: return "t5";
    case ScalarDist::StdChiSq8: return "chisq8";
  }
  return "unknown";
}

ScalarDist parse_scalar_dist(const std::string& name) {
  if (name == "normal" || name == "gaussian") return ScalarDist::StdNormal;
  if (name == "t5" || name == "student_t5") return ScalarDist::StdStudentT5;
  if (name == "chisq8" || name == "chi2_8") return ScalarDist::StdChiSq8;
  throw InvalidArgument("unknown distribution '" + name + "'");
}

double draw_scalar(ScalarDist dist, Rng& rng) {
  switch (dist) {
    case ScalarDist::StdNormal:
      return rng.normal();
    case ScalarDist::StdStudentT5: {
      const double z = rng.normal();
      const double v = sum_of_squared_normals(5, rng);
      return z / std::sqrt(v / 5.0) / std::sqrt(5.0 / 3.0);
    }
    case ScalarDist::StdChiSq8:
      return (sum_of_squared_normals(8, rng) - 8.0) / 4.0;
  }
  return 0.0;
}

double scalar_density(ScalarDist dist, double b) {
  switch (dist) {
    case ScalarDist::StdNormal:
      return std::exp(-0.5 * b * b) / std::sqrt(2.0 * kPi);
    case ScalarDist::StdStudentT5: {
      const double s = std::sqrt(5.0 / 3.0);
      const double x = b * s;
      const double c = std::exp(std::lgamma(3.0) - std::lgamma(2.5)) / std::sqrt(5.0 * kPi);
      return s * c * std::pow(1.0 + x * x / 5.0, -3.0);
    }
    case ScalarDist::StdChiSq8: {
      const double x = 4.0 * b + 8.0;
      if (x <= 0.0) return 0.0;
      return 4.0 * x * x * x * std::exp(-0.5 * x) / 96.0;
    }
  }
  return 0.0;
}

double draw_exp_power(double q, Rng& rng) {
  if (!(q >= 2.0)) throw InvalidArgument("exponential-power shape q must be at least 2");
  const double magnitude = std::pow(rng.gamma(1.0 / q), 1.0 / q);
  const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
  return sign * exp_power_scale(q) * magnitude;
}

double exp_power_density(double q, double z) {
  const double s = exp_power_scale(q);
  return q / (2.0 * s * std::exp(std::lgamma(1.0 / q))) * std::exp(-std::pow(std::abs(z) / s, q));
}

std::string describe(const ProcessSpec& spec) {
  return std::visit(
      Overloaded{
          [](const SineProcess& s) { return "sine:" + to_string(s.dist); },
          [](const WienerKL& w) { return "wiener:J=" + std::to_string(w.terms); },
          [](const GaussianKL& g) {
            std::string out = "gaussian_kl:J=" + std::to_string(g.terms) + ":lambdas=";
            for (std::size_t j = 0; j < g.terms; ++j) {
              out += (j ? ";" : "") + format_double(g.lambdas[j]);
            }
            return out;
          },
          [](const ExpPowerKL& e) {
            std::string out = "exp_power_kl:q=" + format_double(e.q) +
                              ":J=" + std::to_string(e.terms) + ":lambdas=";
            for (std::size_t j = 0; j < e.terms; ++j) {
              out += (j ? ";" : "") + format_double(e.lambdas[j]);
            }
            return out;
          },
      },
      spec);
}

GridPtr default_grid(const ProcessSpec& spec, std::size_t points) {
  if (std::holds_alternative<SineProcess>(spec)) return Grid::equispaced(0.0, kPi, points);
  return Grid::equispaced(0.0, 1.0, points);
}

std::vector<double> wiener_eigenvalues(std::size_t count) {
  std::vector<double> out(count);
  for (std::size_t j = 1; j <= count; ++j) {
    const double f = (static_cast<double>(j) - 0.5) * kPi;
    out[j - 1] = 1.0 / (f * f);
  }
  return out;
}

double wiener_truncation_mass(std::size_t terms) {
  double kept = 0.0;
  for (double v : wiener_eigenvalues(terms)) kept += v;
  return 0.5 - kept;
}

std::vector<double> power_exponential_eigenvalues(std::size_t count, double beta, double alpha) {
  std::vector<double> out(count);
  for (std::size_t j = 1; j <= count; ++j) {
    out[j - 1] = std::exp(-beta * std::pow(static_cast<double>(j), alpha));
  }
  return out;
}

std::vector<double> true_eigenvalues(const ProcessSpec& spec, std::size_t count) {
  std::vector<double> out(count, 0.0);
  std::visit(Overloaded{
                 [&](const SineProcess&) {
                   if (count > 0) out[0] = 1.0;
                 },
                 [&](const WienerKL& w) {
                   const auto l = wiener_eigenvalues(std::min(count, w.terms));
                   std::copy(l.begin(), l.end(), out.begin());
                 },
                 [&](const GaussianKL& g) {
                   for (std::size_t j = 0; j < std::min(count, g.terms); ++j) out[j] = g.lambdas[j];
                 },
                 [&](const ExpPowerKL& e) {
                   for (std::size_t j = 0; j < std::min(count, e.terms); ++j) out[j] = e.lambdas[j];
                 },
             },
             spec);
  return out;
}

std::vector<Curve> true_eigenfunctions(const ProcessSpec& spec, const GridPtr& grid,
                                       std::size_t count) {
  return std::visit(Overloaded{
                        [&](const SineProcess&) {
                          if (count > 1) {
                            throw InvalidArgument("the sine process has a single component");
                          }
                          return std::vector<Curve>{sine_direction(grid)};
                        },
                        [&](const WienerKL&) { return wiener_basis(grid, count); },
                        [&](const GaussianKL&) { return sine_basis(grid, count); },
                        [&](const ExpPowerKL&) { return sine_basis(grid, count); },
                    },
                    spec);
}

FunctionalSample sample_sine(std::size_t n, const GridPtr& grid, ScalarDist dist, Rng& rng) {
  const Curve direction = sine_direction(grid);
  return expand(n, grid, {1.0}, {direction}, [&] { return draw_scalar(dist, rng); });
}

FunctionalSample sample_wiener(std::size_t n, const GridPtr& grid, std::size_t terms, Rng& rng) {
  if (terms == 0) throw InvalidArgument("at least one expansion term is required");
  return expand(n, grid, wiener_eigenvalues(terms), wiener_basis(grid, terms),
                [&] { return rng.normal(); });
}

FunctionalSample sample_gaussian_kl(std::size_t n, const GridPtr& grid,
                                    const std::vector<double>& lambdas, std::size_t terms,
                                    Rng& rng) {
  check_lambdas(lambdas, terms);
  return expand(n, grid, lambdas, sine_basis(grid, terms), [&] { return rng.normal(); });
}

FunctionalSample sample_exp_power_kl(std::size_t n, const GridPtr& grid,
                                     const std::vector<double>& lambdas, double q,
                                     std::size_t terms, Rng& rng) {
  if (!(q >= 2.0)) throw InvalidArgument("exponential-power shape q must be at least 2");
  check_lambdas(lambdas, terms);
  return expand(n, grid, lambdas, sine_basis(grid, terms),
                [&] { return draw_exp_power(q, rng); });
}

FunctionalSample simulate(const ProcessSpec& spec, std::size_t n, const GridPtr& grid, Rng& rng) {
  if (n == 0) throw InvalidArgument("sample size must be at least 1");
  return std::visit(
      Overloaded{
          [&](const SineProcess& s) { return sample_sine(n, grid, s.dist, rng); },
          [&](const WienerKL& w) { return sample_wiener(n, grid, w.terms, rng); },
          [&](const GaussianKL& g) { return sample_gaussian_kl(n, grid, g.lambdas, g.terms, rng); },
          [&](const ExpPowerKL& e) {
            return sample_exp_power_kl(n, grid, e.lambdas, e.q, e.terms, rng);
          },
      },
      spec);
}

std::vector<double> default_b_values(const ProcessSpec& spec) {
  double lo = -4.0;
  double hi = 4.0;
  if (const auto* s = std::get_if<SineProcess>(&spec); s && s->dist == ScalarDist::StdChiSq8) {
    lo = -2.0;
    hi = 6.0;
  }
  constexpr std::size_t count = 160;
  std::vector<double> b(count);
  for (std::size_t i = 0; i < count; ++i) {
    b[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  b.back() = hi;
  return b;
}

FunctionalSample target_curves(const ProcessSpec& spec, const GridPtr& grid,
                               const std::vector<double>& b_values) {
  if (b_values.empty()) throw InvalidArgument("at least one b value is required");
  const double lambda1 = true_eigenvalues(spec, 1).front();
  const Curve e1 = true_eigenfunctions(spec, grid, 1).front();
  const double scale = std::sqrt(lambda1);
  const std::size_t p = grid->size();
  std::vector<double> values(b_values.size() * p);
  for (std::size_t m = 0; m < b_values.size(); ++m) {
    if (!std::isfinite(b_values[m])) throw InvalidArgument("b values must be finite");
    for (std::size_t k = 0; k < p; ++k) values[m * p + k] = b_values[m] * scale * e1[k];
  }
  return FunctionalSample(grid, b_values.size(), std::move(values));
}

double true_intensity(const ProcessSpec& spec, double b) {
  return std::visit(Overloaded{
                        [&](const SineProcess& s) { return scalar_density(s.dist, b); },
                        [&](const WienerKL&) { return std::exp(-0.5 * b * b); },
                        [&](const GaussianKL&) { return std::exp(-0.5 * b * b); },
                        [&](const ExpPowerKL& e) {
                          return std::exp(-0.5 * std::pow(std::abs(b), e.q));
                        },
                    },
                    spec);
}

double true_surrogate_density(const ProcessSpec& spec, double b, std::size_t d) {
  if (d == 0) throw InvalidArgument("dimension must be at least 1");
  return std::visit(
      Overloaded{
          [&](const SineProcess& s) {
            if (d != 1) throw InvalidArgument("the sine process has a single component");
            return scalar_density(s.dist, b);
          },
          [&](const WienerKL& w) {
            if (d > w.terms) throw InvalidArgument("dimension exceeds the expansion length");
            return gaussian_f_d(b, wiener_eigenvalues(d), d);
          },
          [&](const GaussianKL& g) {
            if (d > g.terms) throw InvalidArgument("dimension exceeds the expansion length");
            return gaussian_f_d(b, g.lambdas, d);
          },
          [&](const ExpPowerKL& e) {
            if (d > e.terms) throw InvalidArgument("dimension exceeds the expansion length");
            double value = exp_power_density(e.q, b) / std::sqrt(e.lambdas[0]);
            for (std::size_t j = 1; j < d; ++j) {
              value *= exp_power_density(e.q, 0.0) / std::sqrt(e.lambdas[j]);
            }
            return value;
          },
      },
      spec);
}

}  // namespace smbp
