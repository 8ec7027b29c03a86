#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace smbp {

/// Abscissae t_1 < ... < t_p on [a, b] with trapezoidal quadrature weights.
///
/// Weights are w_1 = (t_2 - t_1)/2, w_p = (t_p - t_{p-1})/2 and
/// w_k = (t_{k+1} - t_{k-1})/2 in the interior, so they sum to b - a.
class Grid {
 public:
  explicit Grid(std::vector<double> points);

  /// p equispaced points with both endpoints included.
  static std::shared_ptr<const Grid> equispaced(double a, double b, std::size_t p);

  std::size_t size() const noexcept { return points_.size(); }
  std::span<const double> points() const noexcept { return points_; }
  std::span<const double> weights() const noexcept { return weights_; }
  double lower() const noexcept { return points_.front(); }
  double upper() const noexcept { return points_.back(); }
  double length() const noexcept { return upper() - lower(); }

  friend bool operator==(const Grid& lhs, const Grid& rhs) noexcept {
    return lhs.points_ == rhs.points_;
  }

 private:
  std::vector<double> points_;
  std::vector<double> weights_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// True when both pointers refer to the same grid or to grids with identical abscissae.
bool same_grid(const GridPtr& a, const GridPtr& b) noexcept;

/// A function sampled on a grid.
class Curve {
 public:
  Curve(GridPtr grid, std::vector<double> values);

  /// The zero function on `grid`.
  static Curve zeros(GridPtr grid);

  const Grid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t k) const noexcept { return values_[k]; }

  Curve operator-(const Curve& other) const;
  Curve operator+(const Curve& other) const;
  Curve operator*(double scale) const;

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

/// n curves on one shared grid, stored row-major (one row per curve).
class FunctionalSample {
 public:
  FunctionalSample(GridPtr grid, std::size_t n, std::vector<double> values);
  explicit FunctionalSample(const std::vector<Curve>& curves);

  const Grid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  std::size_t size() const noexcept { return n_; }
  std::size_t points() const noexcept { return grid_->size(); }

  std::span<const double> row(std::size_t i) const noexcept {
    return {values_.data() + i * grid_->size(), grid_->size()};
  }
  Curve curve(std::size_t i) const;
  std::span<const double> data() const noexcept { return values_; }

 private:
  GridPtr grid_;
  std::size_t n_;
  std::vector<double> values_;
};

/// Quadrature form sum_k w_k f_k g_k on raw value arrays.
double weighted_dot(std::span<const double> weights, std::span<const double> f,
                    std::span<const double> g) noexcept;

/// <f, g> under the trapezoidal rule of the shared grid. Throws GridMismatch.
double inner_product(const Curve& f, const Curve& g);

/// ||f|| = sqrt(<f, f>).
double norm(const Curve& f);

/// ||f - g|| without materializing the difference.
double distance(const Curve& f, const Curve& g);

}  // namespace smbp
