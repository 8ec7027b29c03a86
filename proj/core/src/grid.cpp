#include "smbp/grid.hpp"

#include <cmath>
#include <utility>

#include "smbp/error.hpp"

namespace smbp {

Grid::Grid(std::vector<double> points) : points_(std::move(points)) {
  const std::size_t p = points_.size();
  if (p < 2) throw InvalidArgument("a grid needs at least two points");
  for (std::size_t k = 0; k < p; ++k) {
    if (!std::isfinite(points_[k])) throw InvalidArgument("grid abscissae must be finite");
    if (k > 0 && !(points_[k] > points_[k - 1])) {
      throw InvalidArgument("grid abscissae must be strictly increasing");
    }
  }
  weights_.resize(p);
  weights_.front() = 0.5 * (points_[1] - points_[0]);
  weights_.back() = 0.5 * (points_[p - 1] - points_[p - 2]);
  for (std::size_t k = 1; k + 1 < p; ++k) {
    weights_[k] = 0.5 * (points_[k + 1] - points_[k - 1]);
  }
}

std::shared_ptr<const Grid> Grid::equispaced(double a, double b, std::size_t p) {
  if (p < 2) throw InvalidArgument("a grid needs at least two points");
  if (!(b > a)) throw InvalidArgument("grid interval must satisfy a < b");
  std::vector<double> t(p);
  const double step = (b - a) / static_cast<double>(p - 1);
  for (std::size_t k = 0; k < p; ++k) t[k] = a + step * static_cast<double>(k);
  t.back() = b;
  return std::make_shared<const Grid>(std::move(t));
}

bool same_grid(const GridPtr& a, const GridPtr& b) noexcept {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

Curve::Curve(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw InvalidArgument("curve requires a grid");
  if (values_.size() != grid_->size()) {
    throw InvalidArgument("curve has " + std::to_string(values_.size()) +
                          " values but its grid has " + std::to_string(grid_->size()) +
                          " points");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw InvalidArgument("curve values must be finite");
  }
}

Curve Curve::zeros(GridPtr grid) {
  const std::size_t p = grid->size();
  return Curve(std::move(grid), std::vector<double>(p, 0.0));
}

Curve Curve::operator-(const Curve& other) const {
  if (!same_grid(grid_, other.grid_)) throw GridMismatch();
  std::vector<double> out(values_.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = values_[k] - other.values_[k];
  return Curve(grid_, std::move(out));
}

Curve Curve::operator+(const Curve& other) const {
  if (!same_grid(grid_, other.grid_)) throw GridMismatch();
  std::vector<double> out(values_.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = values_[k] + other.values_[k];
  return Curve(grid_, std::move(out));
}

Curve Curve::operator*(double scale) const {
  std::vector<double> out(values_);
  for (double& v : out) v *= scale;
  return Curve(grid_, std::move(out));
}

FunctionalSample::FunctionalSample(GridPtr grid, std::size_t n, std::vector<double> values)
    : grid_(std::move(grid)), n_(n), values_(std::move(values)) {
  if (!grid_) throw InvalidArgument("sample requires a grid");
  if (n_ == 0) throw InvalidArgument("a functional sample needs at least one curve");
  if (values_.size() != n_ * grid_->size()) {
    throw InvalidArgument("sample storage does not match n x p");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw InvalidArgument("curve values must be finite");
  }
}

FunctionalSample::FunctionalSample(const std::vector<Curve>& curves) : n_(curves.size()) {
  if (curves.empty()) throw InvalidArgument("a functional sample needs at least one curve");
  grid_ = curves.front().grid_ptr();
  values_.reserve(n_ * grid_->size());
  for (const Curve& c : curves) {
    if (!same_grid(grid_, c.grid_ptr())) throw GridMismatch("sample curves must share one grid");
    values_.insert(values_.end(), c.values().begin(), c.values().end());
  }
}

Curve FunctionalSample::curve(std::size_t i) const {
  auto r = row(i);
  return Curve(grid_, std::vector<double>(r.begin(), r.end()));
}

double weighted_dot(std::span<const double> weights, std::span<const double> f,
                    std::span<const double> g) noexcept {
  double acc = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) acc += weights[k] * f[k] * g[k];
  return acc;
}

double inner_product(const Curve& f, const Curve& g) {
  if (!same_grid(f.grid_ptr(), g.grid_ptr())) throw GridMismatch();
  return weighted_dot(f.grid().weights(), f.values(), g.values());
}

double norm(const Curve& f) { return std::sqrt(inner_product(f, f)); }

double distance(const Curve& f, const Curve& g) {
  if (!same_grid(f.grid_ptr(), g.grid_ptr())) throw GridMismatch();
  auto w = f.grid().weights();
  double acc = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double diff = f[k] - g[k];
    acc += w[k] * diff * diff;
  }
  return std::sqrt(acc);
}

}  // namespace smbp
