#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace smbp {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<const double> data() const noexcept { return data_; }

  Matrix transpose() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Largest |a_ij - a_ji|.
double asymmetry(const Matrix& a) noexcept;

double frobenius_norm(const Matrix& a) noexcept;

struct SymmetricEigen {
  std::vector<double> values;  // unsorted, as produced by the rotations
  Matrix vectors;              // column k is the eigenvector of values[k]
  std::size_t sweeps = 0;
};

/// Cyclic Jacobi rotations on a symmetric matrix. Stops once the off-diagonal
/// Frobenius norm drops below `tolerance * max(1, ||A||_F)`.
SymmetricEigen jacobi_eigen(Matrix a, double tolerance = 1e-12, std::size_t max_sweeps = 100);

}  // namespace smbp
