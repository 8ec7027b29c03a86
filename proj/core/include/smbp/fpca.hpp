#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "smbp/grid.hpp"
#include "smbp/linalg.hpp"

namespace smbp {

/// Estimated Karhunen-Loeve system: sample mean, descending eigenvalues and
/// eigenfunctions orthonormal under the quadrature inner product.
class EigenSystem {
 public:
  EigenSystem(Curve mean, std::vector<double> eigenvalues, std::vector<Curve> eigenfunctions);

  const Curve& mean() const noexcept { return mean_; }
  std::span<const double> eigenvalues() const noexcept { return eigenvalues_; }
  const std::vector<Curve>& eigenfunctions() const noexcept { return eigenfunctions_; }
  const Curve& eigenfunction(std::size_t j) const { return eigenfunctions_.at(j); }
  std::size_t size() const noexcept { return eigenvalues_.size(); }
  const Grid& grid() const noexcept { return mean_.grid(); }
  const GridPtr& grid_ptr() const noexcept { return mean_.grid_ptr(); }

 private:
  Curve mean_;
  std::vector<double> eigenvalues_;
  std::vector<Curve> eigenfunctions_;
};

/// n x d matrix of principal-component scores; row i holds curve i.
class ScoreMatrix {
 public:
  ScoreMatrix(std::size_t n, std::size_t d) : entries_(n, d) {}
  explicit ScoreMatrix(Matrix entries) : entries_(std::move(entries)) {}

  std::size_t rows() const noexcept { return entries_.rows(); }
  std::size_t dimension() const noexcept { return entries_.cols(); }
  double operator()(std::size_t i, std::size_t j) const noexcept { return entries_(i, j); }
  double& operator()(std::size_t i, std::size_t j) noexcept { return entries_(i, j); }
  std::span<const double> row(std::size_t i) const noexcept { return entries_.row(i); }
  const Matrix& matrix() const noexcept { return entries_; }

  std::vector<double> column(std::size_t j) const;

  /// Keeps columns [first, first + count).
  ScoreMatrix columns(std::size_t first, std::size_t count) const;

 private:
  Matrix entries_;
};

Curve empirical_mean(const FunctionalSample& sample);

/// C_kl = (1/n) sum_i (X_i - mean)(t_k) (X_i - mean)(t_l).
Matrix empirical_covariance(const FunctionalSample& sample);

/// Eigenpairs of the covariance integral operator. Solves the symmetric problem
/// W^{1/2} C W^{1/2} v = lambda v with W the quadrature weights and maps back
/// through xi = W^{-1/2} v. Eigenvalues in (-1e-10, 0) are clamped to zero;
/// anything more negative is reported as a broken covariance.
EigenSystem eigendecompose(const Matrix& cov, const GridPtr& grid, Curve mean);

/// empirical_mean + empirical_covariance + eigendecompose.
EigenSystem fpca(const FunctionalSample& sample);

/// theta_ji = <X_i - mean, xi_j>, j < d.
ScoreMatrix scores(const FunctionalSample& sample, const EigenSystem& sys, std::size_t d);
std::vector<double> scores(const Curve& x, const EigenSystem& sys, std::size_t d);

/// Projection of raw values onto `basis` after subtracting `center`.
std::vector<double> project(std::span<const double> values, const Curve& center,
                            std::span<const Curve> basis);

/// Fraction of explained variance sum_{j<=d} lambda_j / sum_j lambda_j.
double fev(std::span<const double> eigenvalues, std::size_t d);

/// Same, with an externally known total variance (e.g. an analytic series sum).
double fev(std::span<const double> eigenvalues, std::size_t d, double total);

/// Smallest d with fev(d) >= threshold.
std::size_t select_dimension_fev(std::span<const double> eigenvalues, double threshold);

/// One row per eigenfunction: eigenvalue followed by the function values.
/// The header row is "lambda" followed by the grid abscissae.
void write_eigensystem_csv(std::ostream& out, const EigenSystem& sys);

void write_scores_csv(std::ostream& out, const ScoreMatrix& scores);

}  // namespace smbp
