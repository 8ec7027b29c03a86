#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "smbp/error.hpp"
#include "smbp/fpca.hpp"
#include "smbp/processes.hpp"

using namespace smbp;

namespace {

constexpr double kPi = std::numbers::pi;

Curve sine_e1(const GridPtr& g) {
  std::vector<double> v;
  for (double t : g->points()) v.push_back(std::sqrt(2.0 / kPi) * std::sin(t));
  return Curve(g, v);
}

FunctionalSample sine_sample(const GridPtr& g, std::vector<double> coefs) {
  std::vector<Curve> curves;
  const Curve e = sine_e1(g);
  for (double a : coefs) curves.push_back(e * a);
  return FunctionalSample(curves);
}

FunctionalSample wiener(std::size_t n, std::uint64_t seed) {
  auto g = Grid::equispaced(0.0, 1.0, 100);
  Rng rng(seed);
  return sample_wiener(n, g, 50, rng);
}

}  // namespace

TEST(EmpiricalMean, Symmetric) {
  auto g = Grid::equispaced(0.0, kPi, 100);
  Curve m = empirical_mean(sine_sample(g, {1.0, -1.0}));
  for (double v : m.values()) EXPECT_NEAR(v, 0.0, 1e-15);
}

TEST(EmpiricalMean, HandAverage) {
  auto g = Grid::equispaced(0.0, kPi, 100);
  Curve m = empirical_mean(sine_sample(g, {1.0, -1.0, 2.0}));
  Curve e = sine_e1(g);
  for (std::size_t k = 0; k < g->size(); ++k) EXPECT_NEAR(m[k], 2.0 / 3.0 * e[k], 1e-15);
}

TEST(EmpiricalCovariance, IdenticalCurvesGiveZero) {
  auto g = Grid::equispaced(0.0, kPi, 20);
  Matrix c = empirical_covariance(sine_sample(g, {1.5, 1.5, 1.5}));
  for (double v : c.data()) EXPECT_NEAR(v, 0.0, 1e-30);
}

TEST(EmpiricalCovariance, RankOneHandComputation) {
  auto g = Grid::equispaced(0.0, kPi, 20);
  Curve e = sine_e1(g);
  Matrix c = empirical_covariance(sine_sample(g, {1.0, -1.0}));
  for (std::size_t k = 0; k < 20; ++k) {
    for (std::size_t l = 0; l < 20; ++l) {
      EXPECT_NEAR(c(k, l), e[k] * e[l], 1e-15);
      EXPECT_EQ(c(k, l), c(l, k));
    }
  }
}

TEST(Eigendecompose, RankOne) {
  auto g = Grid::equispaced(0.0, kPi, 100);
  const Curve e = sine_e1(g);
  const Curve unit = e * (1.0 / norm(e));
  std::vector<Curve> curves{unit * 1.7, unit * -1.7};
  EigenSystem sys = fpca(FunctionalSample(curves));
  EXPECT_NEAR(sys.eigenvalues()[0], 1.7 * 1.7, 1e-12);
  EXPECT_LT(sys.eigenvalues()[1], 1e-10);
  EXPECT_NEAR(std::abs(inner_product(sys.eigenfunction(0), unit)), 1.0, 1e-12);
}

TEST(Eigendecompose, ZeroMatrix) {
  auto g = Grid::equispaced(0.0, 1.0, 10);
  EigenSystem sys = eigendecompose(Matrix(10, 10), g, Curve::zeros(g));
  for (double v : sys.eigenvalues()) EXPECT_EQ(v, 0.0);
}

TEST(Eigendecompose, RejectsAsymmetric) {
  auto g = Grid::equispaced(0.0, 1.0, 3);
  Matrix c(3, 3);
  c(0, 1) = 1e-6;
  EXPECT_THROW(eigendecompose(c, g, Curve::zeros(g)), InvalidArgument);
}

TEST(Eigendecompose, RejectsNegativeEigenvalue) {
  auto g = Grid::equispaced(0.0, 1.0, 3);
  Matrix c(3, 3);
  c(1, 1) = -1.0;
  EXPECT_THROW(eigendecompose(c, g, Curve::zeros(g)), Error);
}

TEST(Fpca, WienerInvariants) {
  const FunctionalSample s = wiener(300, 5);
  const EigenSystem sys = fpca(s);
  const std::size_t p = s.points();
  ASSERT_EQ(sys.size(), p);

  for (std::size_t j = 1; j < p; ++j) EXPECT_LE(sys.eigenvalues()[j], sys.eigenvalues()[j - 1]);

  for (std::size_t i = 0; i < 8; ++i) {
    for (std::size_t j = 0; j < 8; ++j) {
      EXPECT_NEAR(inner_product(sys.eigenfunction(i), sys.eigenfunction(j)), i == j ? 1.0 : 0.0,
                  1e-8);
    }
  }

  // Trace identity.
  double trace = 0.0;
  for (double v : sys.eigenvalues()) trace += v;
  double spread = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double dist = distance(s.curve(i), sys.mean());
    spread += dist * dist;
  }
  spread /= static_cast<double>(s.size());
  EXPECT_NEAR(trace / spread, 1.0, 1e-8);

  // Reconstruction of the covariance from the full decomposition.
  const Matrix c = empirical_covariance(s);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < p; ++k) {
    for (std::size_t l = 0; l < p; ++l) {
      double r = 0.0;
      for (std::size_t j = 0; j < p; ++j) {
        r += sys.eigenvalues()[j] * sys.eigenfunction(j)[k] * sys.eigenfunction(j)[l];
      }
      num += (r - c(k, l)) * (r - c(k, l));
      den += c(k, l) * c(k, l);
    }
  }
  EXPECT_LT(std::sqrt(num / den), 1e-6);

  // Score columns: zero mean, variance lambda, uncorrelated.
  const std::size_t d = 5;
  const ScoreMatrix sc = scores(s, sys, d);
  const double n = static_cast<double>(s.size());
  for (std::size_t a = 0; a < d; ++a) {
    double mean = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) mean += sc(i, a);
    EXPECT_NEAR(mean / n, 0.0, 1e-10);
    for (std::size_t b = 0; b < d; ++b) {
      double cov = 0.0;
      for (std::size_t i = 0; i < s.size(); ++i) cov += sc(i, a) * sc(i, b);
      cov /= n;
      if (a == b) {
        EXPECT_NEAR(cov / sys.eigenvalues()[a], 1.0, 1e-8);
      } else {
        EXPECT_NEAR(cov, 0.0, 1e-8 * sys.eigenvalues()[0]);
      }
    }
  }
}

TEST(Fpca, SignConventionLargestEntryPositive) {
  const EigenSystem sys = fpca(wiener(100, 9));
  for (std::size_t j = 0; j < 10; ++j) {
    double best = 0.0;
    for (double v : sys.eigenfunction(j).values()) {
      if (std::abs(v) > std::abs(best)) best = v;
    }
    EXPECT_GT(best, 0.0);
  }
}

TEST(Fpca, WienerFirstEigenvalue) {
  const EigenSystem sys = fpca(wiener(2000, 21));
  EXPECT_NEAR(sys.eigenvalues()[0], 4.0 / (kPi * kPi), 0.03);
}

TEST(Scores, MeanCurveScoresZero) {
  const EigenSystem sys = fpca(wiener(50, 2));
  for (double v : scores(sys.mean(), sys, 4)) EXPECT_NEAR(v, 0.0, 1e-14);
}

TEST(Scores, AnalyticProjection) {
  auto g = Grid::equispaced(0.0, kPi, 100);
  const Curve e = sine_e1(g);
  const EigenSystem sys(Curve::zeros(g), {1.0}, {e});
  for (double b : {-3.0, 0.5, 2.0}) EXPECT_NEAR(scores(e * b, sys, 1)[0], b, 1e-3);
}

TEST(Scores, RangeAndGridChecks) {
  const EigenSystem sys = fpca(wiener(20, 2));
  EXPECT_THROW(scores(sys.mean(), sys, 0), InvalidArgument);
  EXPECT_THROW(scores(sys.mean(), sys, 101), InvalidArgument);
  auto other = Grid::equispaced(0.0, 2.0, 100);
  EXPECT_THROW(scores(Curve::zeros(other), sys, 1), GridMismatch);
}

TEST(Fev, WienerSpectrum) {
  const auto lambda = wiener_eigenvalues(200000);
  const double total = 0.5;
  EXPECT_NEAR(fev(lambda, 1, total), 8.0 / (kPi * kPi), 1e-12);
  const double expected[] = {0.811, 0.901, 0.933, 0.950, 0.960, 0.966};
  for (std::size_t d = 1; d <= 6; ++d) EXPECT_NEAR(fev(lambda, d, total), expected[d - 1], 1e-3);
  EXPECT_EQ(fev(lambda, lambda.size()), 1.0);
}

TEST(Fev, SelectDimension) {
  const auto lambda = wiener_eigenvalues(200000);
  EXPECT_EQ(select_dimension_fev(lambda, 0.90), 2u);
  // FEV(4) = 0.94960 falls just short of 0.95.
  EXPECT_EQ(select_dimension_fev(lambda, 0.95), 5u);
  EXPECT_EQ(select_dimension_fev(std::vector<double>{1, 0, 0, 0}, 0.5), 1u);
}

TEST(Fev, Errors) {
  EXPECT_THROW(fev(std::vector<double>{0, 0}, 1), InvalidArgument);
  EXPECT_THROW(fev(std::vector<double>{1, -1}, 1), InvalidArgument);
  EXPECT_THROW(select_dimension_fev(std::vector<double>{1, 1}, 1.0), InvalidArgument);
  EXPECT_THROW(select_dimension_fev(std::vector<double>{1, 1}, 0.0), InvalidArgument);
  EXPECT_THROW(select_dimension_fev(std::vector<double>{0, 0}, 0.5), InvalidArgument);
}
