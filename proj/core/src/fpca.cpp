#include "smbp/fpca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "smbp/csv.hpp"
#include "smbp/error.hpp"

namespace smbp {

namespace {

constexpr double kClampTolerance = 1e-10;
constexpr double kSymmetryTolerance = 1e-10;

}  // namespace

EigenSystem::EigenSystem(Curve mean, std::vector<double> eigenvalues,
                         std::vector<Curve> eigenfunctions)
    : mean_(std::move(mean)),
      eigenvalues_(std::move(eigenvalues)),
      eigenfunctions_(std::move(eigenfunctions)) {
  if (eigenvalues_.size() != eigenfunctions_.size()) {
    throw InvalidArgument("eigenvalue and eigenfunction counts differ");
  }
  for (std::size_t j = 0; j < eigenfunctions_.size(); ++j) {
    if (!same_grid(mean_.grid_ptr(), eigenfunctions_[j].grid_ptr())) throw GridMismatch();
    if (j > 0 && eigenvalues_[j] > eigenvalues_[j - 1]) {
      throw InvalidArgument("eigenvalues must be sorted in descending order");
    }
  }
}

std::vector<double> ScoreMatrix::column(std::size_t j) const {
  std::vector<double> out(rows());
  for (std::size_t i = 0; i < rows(); ++i) out[i] = entries_(i, j);
  return out;
}

ScoreMatrix ScoreMatrix::columns(std::size_t first, std::size_t count) const {
  if (first + count > dimension()) throw InvalidArgument("score column range out of bounds");
  ScoreMatrix out(rows(), count);
  for (std::size_t i = 0; i < rows(); ++i) {
    for (std::size_t j = 0; j < count; ++j) out(i, j) = entries_(i, first + j);
  }
  return out;
}

Curve empirical_mean(const FunctionalSample& sample) {
  const std::size_t n = sample.size();
  const std::size_t p = sample.points();
  std::vector<double> mean(p, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    auto r = sample.row(i);
    for (std::size_t k = 0; k < p; ++k) mean[k] += r[k];
  }
  for (double& m : mean) m /= static_cast<double>(n);
  return Curve(sample.grid_ptr(), std::move(mean));
}

Matrix empirical_covariance(const FunctionalSample& sample) {
  const std::size_t n = sample.size();
  const std::size_t p = sample.points();
  const Curve mean = empirical_mean(sample);
  Matrix cov(p, p);
  std::vector<double> centered(p);
  for (std::size_t i = 0; i < n; ++i) {
    auto r = sample.row(i);
    for (std::size_t k = 0; k < p; ++k) centered[k] = r[k] - mean[k];
    for (std::size_t k = 0; k < p; ++k) {
      const double ck = centered[k];
      auto cov_row = cov.row(k);
      for (std::size_t l = k; l < p; ++l) cov_row[l] += ck * centered[l];
    }
  }
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k < p; ++k) {
    for (std::size_t l = k; l < p; ++l) {
      cov(k, l) *= scale;
      cov(l, k) = cov(k, l);
    }
  }
  return cov;
}

EigenSystem eigendecompose(const Matrix& cov, const GridPtr& grid, Curve mean) {
  const std::size_t p = grid->size();
  if (cov.rows() != p || cov.cols() != p) {
    throw InvalidArgument("covariance dimension does not match the grid");
  }
  if (!same_grid(grid, mean.grid_ptr())) throw GridMismatch();
  if (asymmetry(cov) > kSymmetryTolerance) {
    throw InvalidArgument("covariance matrix is not symmetric");
  }

  auto w = grid->weights();
  std::vector<double> root(p);
  for (std::size_t k = 0; k < p; ++k) root[k] = std::sqrt(w[k]);

  Matrix scaled(p, p);
  for (std::size_t k = 0; k < p; ++k) {
    for (std::size_t l = k; l < p; ++l) {
      // Symmetrize exactly so the rotations see a symmetric matrix.
      const double c = 0.5 * (cov(k, l) + cov(l, k));
      scaled(k, l) = root[k] * c * root[l];
      scaled(l, k) = scaled(k, l);
    }
  }

  SymmetricEigen eig = jacobi_eigen(std::move(scaled));

  std::vector<std::size_t> order(p);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return eig.values[a] > eig.values[b]; });

  const double scale = std::max(1.0, std::abs(eig.values[order.front()]));
  std::vector<double> values;
  std::vector<Curve> functions;
  values.reserve(p);
  functions.reserve(p);
  for (std::size_t idx : order) {
    double lambda = eig.values[idx];
    if (lambda < 0.0) {
      if (lambda < -kClampTolerance * scale) {
        throw Error("covariance has a negative eigenvalue " + format_double(lambda));
      }
      lambda = 0.0;
    }
    std::vector<double> xi(p);
    std::size_t argmax = 0;
    for (std::size_t k = 0; k < p; ++k) {
      xi[k] = eig.vectors(k, idx) / root[k];
      if (std::abs(xi[k]) > std::abs(xi[argmax])) argmax = k;
    }
    if (xi[argmax] < 0.0) {
      for (double& v : xi) v = -v;
    }
    values.push_back(lambda);
    functions.emplace_back(grid, std::move(xi));
  }
  return EigenSystem(std::move(mean), std::move(values), std::move(functions));
}

EigenSystem fpca(const FunctionalSample& sample) {
  return eigendecompose(empirical_covariance(sample), sample.grid_ptr(), empirical_mean(sample));
}

std::vector<double> project(std::span<const double> values, const Curve& center,
                            std::span<const Curve> basis) {
  const auto w = center.grid().weights();
  const std::size_t p = w.size();
  std::vector<double> out(basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const auto xi = basis[j].values();
    double acc = 0.0;
    for (std::size_t k = 0; k < p; ++k) acc += w[k] * (values[k] - center[k]) * xi[k];
    out[j] = acc;
  }
  return out;
}

ScoreMatrix scores(const FunctionalSample& sample, const EigenSystem& sys, std::size_t d) {
  if (d == 0 || d > sys.size()) {
    throw InvalidArgument("requested " + std::to_string(d) + " scores but " +
                          std::to_string(sys.size()) + " eigenfunctions are available");
  }
  if (!same_grid(sample.grid_ptr(), sys.grid_ptr())) throw GridMismatch();
  std::span<const Curve> basis(sys.eigenfunctions().data(), d);
  ScoreMatrix out(sample.size(), d);
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const auto theta = project(sample.row(i), sys.mean(), basis);
    for (std::size_t j = 0; j < d; ++j) out(i, j) = theta[j];
  }
  return out;
}

std::vector<double> scores(const Curve& x, const EigenSystem& sys, std::size_t d) {
  if (d == 0 || d > sys.size()) {
    throw InvalidArgument("requested " + std::to_string(d) + " scores but " +
                          std::to_string(sys.size()) + " eigenfunctions are available");
  }
  if (!same_grid(x.grid_ptr(), sys.grid_ptr())) throw GridMismatch();
  return project(x.values(), sys.mean(), std::span<const Curve>(sys.eigenfunctions().data(), d));
}

double fev(std::span<const double> eigenvalues, std::size_t d) {
  double total = 0.0;
  for (double v : eigenvalues) {
    if (v < 0.0) throw InvalidArgument("eigenvalues must be nonnegative");
    total += v;
  }
  return fev(eigenvalues, d, total);
}

double fev(std::span<const double> eigenvalues, std::size_t d, double total) {
  if (!(total > 0.0)) throw InvalidArgument("FEV is undefined for an all-zero spectrum");
  if (d > eigenvalues.size()) throw InvalidArgument("FEV dimension exceeds the spectrum length");
  double partial = 0.0;
  for (std::size_t j = 0; j < d; ++j) partial += eigenvalues[j];
  return std::min(1.0, partial / total);
}

std::size_t select_dimension_fev(std::span<const double> eigenvalues, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw InvalidArgument("FEV threshold must lie in (0, 1)");
  }
  double total = 0.0;
  for (double v : eigenvalues) {
    if (v < 0.0) throw InvalidArgument("eigenvalues must be nonnegative");
    total += v;
  }
  if (!(total > 0.0)) throw InvalidArgument("FEV is undefined for an all-zero spectrum");
  double partial = 0.0;
  double best = 0.0;
  for (std::size_t j = 0; j < eigenvalues.size(); ++j) {
    partial += eigenvalues[j];
    best = partial / total;
    if (best >= threshold) return j + 1;
  }
  throw InvalidArgument("FEV threshold " + format_double(threshold) +
                        " is unreachable; maximum attainable FEV is " + format_double(best));
}

void write_eigensystem_csv(std::ostream& out, const EigenSystem& sys) {
  out << "lambda";
  for (double t : sys.grid().points()) out << ',' << format_double(t);
  out << '\n';
  for (std::size_t j = 0; j < sys.size(); ++j) {
    out << format_double(sys.eigenvalues()[j]);
    for (double v : sys.eigenfunction(j).values()) out << ',' << format_double(v);
    out << '\n';
  }
}

void write_scores_csv(std::ostream& out, const ScoreMatrix& scores) {
  out << "curve";
  for (std::size_t j = 0; j < scores.dimension(); ++j) out << ",theta_" << (j + 1);
  out << '\n';
  for (std::size_t i = 0; i < scores.rows(); ++i) {
    out << i;
    for (double v : scores.row(i)) out << ',' << format_double(v);
    out << '\n';
  }
}

}  // namespace smbp
