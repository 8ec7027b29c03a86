#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "smbp/density.hpp"
#include "smbp/error.hpp"
#include "smbp/processes.hpp"
#include "smbp/random.hpp"

using namespace smbp;

namespace {

ScoreMatrix column(const std::vector<double>& v) {
  ScoreMatrix m(v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
  return m;
}

ScoreMatrix random_scores(std::size_t n, std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  ScoreMatrix m(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) m(i, j) = rng.normal() * (1.0 + 0.5 * double(j));
  }
  return m;
}

}  // namespace

TEST(Kernel, ProfileValues) {
  EXPECT_DOUBLE_EQ(kernel_profile(KernelSpec(KernelFamily::Epanechnikov, 1), 0.0), 0.75);
  EXPECT_NEAR(kernel_profile(KernelSpec(KernelFamily::Gaussian, 1), 0.0),
              1.0 / std::sqrt(2.0 * std::numbers::pi), 1e-15);
  // 1 / (omega_2 * int_0^1 exp(-r^2/2) r^2 dr), scipy quad.
  EXPECT_NEAR(kernel_profile(KernelSpec(KernelFamily::TruncatedGaussian, 3), 0.0),
              0.31946798038498314, 1e-12);
  for (auto f : {KernelFamily::Epanechnikov, KernelFamily::TruncatedGaussian}) {
    EXPECT_EQ(kernel_profile(KernelSpec(f, 2), 1.0001), 0.0);
  }
  EXPECT_GT(kernel_profile(KernelSpec(KernelFamily::Gaussian, 2), 1.5), 0.0);
  EXPECT_THROW(kernel_profile(KernelSpec(KernelFamily::Gaussian, 2), -0.1), InvalidArgument);
  EXPECT_THROW(KernelSpec(KernelFamily::Gaussian, 0), InvalidArgument);
}

TEST(Kernel, RadialNormalization) {
  // omega_{d-1} int_0^R profile(r) r^{d-1} dr = 1 by composite Simpson.
  for (auto family :
       {KernelFamily::Epanechnikov, KernelFamily::TruncatedGaussian, KernelFamily::Gaussian}) {
    for (std::size_t d = 1; d <= 10; ++d) {
      const KernelSpec k(family, d);
      const double upper = k.compact() ? 1.0 : 40.0;
      const std::size_t m = 20000;
      const double h = upper / m;
      double acc = 0.0;
      for (std::size_t i = 0; i <= m; ++i) {
        const double r = h * double(i);
        const double w = (i == 0 || i == m) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        acc += w * k.profile(r) * std::pow(r, double(d - 1));
      }
      EXPECT_NEAR(unit_sphere_area(d) * acc * h / 3.0, 1.0, 1e-10)
          << to_string(family) << " d=" << d;
    }
  }
}

TEST(Kernel, ParseNames) {
  EXPECT_EQ(parse_kernel_family("epanechnikov-radial"), KernelFamily::Epanechnikov);
  EXPECT_EQ(parse_kernel_family("truncated_gaussian"), KernelFamily::TruncatedGaussian);
  EXPECT_EQ(parse_kernel_family(to_string(KernelFamily::Gaussian)), KernelFamily::Gaussian);
  EXPECT_THROW(parse_kernel_family("box"), InvalidArgument);
}

TEST(Bandwidth, Rate) {
  EXPECT_EQ(bandwidth_rate(1, 3, 2.5, 1.0), 1.0);
  EXPECT_NEAR(bandwidth_rate(100000, 1, 2.0, 1.0), 0.1, 1e-15);
  double prev = 2.0;
  for (std::size_t n = 1; n < 5000; n += 37) {
    const double h = bandwidth_rate(n, 2, 4.0, 1.3);
    EXPECT_LT(h, prev);
    prev = h;
  }
  EXPECT_THROW(bandwidth_rate(10, 1, 1.9, 1.0), InvalidArgument);
}

TEST(Bandwidth, NormalScale) {
  // Unit sample variance, n = 100, d = 1.
  Rng rng(1);
  std::vector<double> v(100);
  for (auto& x : v) x = rng.normal();
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= 100.0;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / 99.0);
  for (auto& x : v) x = (x - mean) / sd;
  EXPECT_NEAR(bandwidth_normal_scale(column(v)), 0.42168460634274996, 1e-12);

  const ScoreMatrix s = random_scores(50, 3, 2);
  ScoreMatrix scaled(50, 3);
  for (std::size_t i = 0; i < 50; ++i) {
    for (std::size_t j = 0; j < 3; ++j) scaled(i, j) = 2.5 * s(i, j);
  }
  EXPECT_NEAR(bandwidth_normal_scale(scaled), 2.5 * bandwidth_normal_scale(s), 1e-12);
  EXPECT_GT(bandwidth_normal_scale(s), 0.0);
  EXPECT_THROW(bandwidth_normal_scale(column({1.0, 1.0, 1.0})), InvalidArgument);
}

TEST(Bandwidth, RuleParsingRoundTrip) {
  const BandwidthRule rules[] = {NormalScaleRule{}, RateRule{}, RateRule{3.0, std::nullopt},
                                 RateRule{4.0, 0.5}, FixedBandwidth{0.25}};
  for (const auto& r : rules) EXPECT_EQ(to_string(parse_bandwidth_rule(to_string(r))), to_string(r));
  EXPECT_THROW(parse_bandwidth_rule("silverman"), InvalidArgument);
  EXPECT_THROW(parse_bandwidth_rule("fixed:-1"), InvalidArgument);
}

TEST(Bandwidth, RateDefaults) {
  const ScoreMatrix s = random_scores(200, 2, 5);
  // p defaults to floor(max(2, 3)) + 1 = 4 at d = 2; c to the pooled scale.
  EXPECT_NEAR(select_bandwidth(RateRule{}, s),
              pooled_score_scale(s) * std::pow(200.0, -1.0 / 10.0), 1e-14);
  EXPECT_EQ(select_bandwidth(FixedBandwidth{0.3}, s), 0.3);
}

TEST(Kde, HandCases) {
  const KernelSpec epa(KernelFamily::Epanechnikov, 1);
  const DensityEstimator one(column({0.0}), 1.0, epa);
  EXPECT_DOUBLE_EQ(one.evaluate(std::vector<double>{0.0}), 0.75);
  EXPECT_EQ(one.evaluate(std::vector<double>{1.5}), 0.0);
  const DensityEstimator two(column({-0.5, 0.5}), 1.0, epa);
  EXPECT_DOUBLE_EQ(kde_evaluate(two, std::vector<double>{0.0}), 0.5625);
  EXPECT_THROW(two.evaluate(std::vector<double>{0.0, 1.0}), InvalidArgument);
  EXPECT_THROW(DensityEstimator(column({0.0}), 0.0, epa), InvalidArgument);
  EXPECT_THROW(DensityEstimator(column({0.0}), 1.0, KernelSpec(KernelFamily::Epanechnikov, 2)),
               InvalidArgument);
}

TEST(Kde, IntegratesToOne1D) {
  const ScoreMatrix s = random_scores(60, 1, 3);
  for (auto family : {KernelFamily::Epanechnikov, KernelFamily::TruncatedGaussian}) {
    const DensityEstimator est(s, 0.4, KernelSpec(family, 1));
    double lo = 1e9, hi = -1e9;
    for (std::size_t i = 0; i < 60; ++i) {
      lo = std::min(lo, s(i, 0));
      hi = std::max(hi, s(i, 0));
    }
    lo -= 0.5;
    hi += 0.5;
    const std::size_t m = 20000;
    const double step = (hi - lo) / m;
    double acc = 0.0;
    for (std::size_t k = 0; k <= m; ++k) {
      const double w = (k == 0 || k == m) ? 0.5 : 1.0;
      acc += w * est.evaluate(std::vector<double>{lo + step * double(k)});
    }
    EXPECT_NEAR(acc * step, 1.0, 1e-3) << to_string(family);
  }
}

TEST(Kde, IntegratesToOne2D) {
  const ScoreMatrix s = random_scores(25, 2, 4);
  const DensityEstimator est(s, 0.6, KernelSpec(KernelFamily::Epanechnikov, 2));
  double lo[2] = {1e9, 1e9}, hi[2] = {-1e9, -1e9};
  for (std::size_t i = 0; i < 25; ++i) {
    for (int j = 0; j < 2; ++j) {
      lo[j] = std::min(lo[j], s(i, j) - 0.7);
      hi[j] = std::max(hi[j], s(i, j) + 0.7);
    }
  }
  const std::size_t m = 600;
  const double hx = (hi[0] - lo[0]) / m, hy = (hi[1] - lo[1]) / m;
  double acc = 0.0;
  for (std::size_t a = 0; a <= m; ++a) {
    const double wa = (a == 0 || a == m) ? 0.5 : 1.0;
    for (std::size_t b = 0; b <= m; ++b) {
      const double wb = (b == 0 || b == m) ? 0.5 : 1.0;
      acc += wa * wb *
             est.evaluate(std::vector<double>{lo[0] + hx * double(a), lo[1] + hy * double(b)});
    }
  }
  EXPECT_NEAR(acc * hx * hy, 1.0, 1e-3);
}

TEST(SurrogateDensity, SymmetricPairAndSignInvariance) {
  auto g = Grid::equispaced(0.0, 1.0, 100);
  Rng rng(6);
  FunctionalSample half = sample_wiener(100, g, 50, rng);
  std::vector<double> values(half.data().begin(), half.data().end());
  for (double v : half.data()) values.push_back(-v);
  const FunctionalSample s(g, 200, values);

  const FunctionalSample targets = target_curves(WienerKL{}, g, {-1.0, 0.0, 1.0});
  const SurrogateDensity est =
      estimate_surrogate_density(s, targets, 2, KernelFamily::Gaussian, NormalScaleRule{});
  ASSERT_EQ(est.values.size(), 3u);
  EXPECT_NEAR(est.values[0], est.values[2], 1e-12 * est.values[1]);
  EXPECT_GE(est.values[1], est.values[0]);

  // Flipping eigenfunction signs leaves every density value unchanged.
  const EigenSystem sys = fpca(s);
  std::vector<Curve> flipped;
  for (std::size_t j = 0; j < sys.size(); ++j) {
    flipped.push_back(j % 2 ? sys.eigenfunction(j) * -1.0 : sys.eigenfunction(j));
  }
  const SurrogateDensity alt = estimate_density_on_basis(
      s, sys.mean(), std::span<const Curve>(flipped.data(), 2), targets, KernelFamily::Gaussian,
      NormalScaleRule{});
  for (std::size_t m = 0; m < 3; ++m) EXPECT_NEAR(alt.values[m], est.values[m], 1e-12);
}

TEST(SurrogateDensity, TrueBasisAgreesWithEstimated) {
  auto g = Grid::equispaced(0.0, 1.0, 100);
  Rng rng(31);
  const FunctionalSample s = sample_wiener(2000, g, 50, rng);
  const WienerKL spec{50};
  const auto b = default_b_values(spec);
  const FunctionalSample targets = target_curves(spec, g, b);
  const SurrogateDensity est =
      estimate_surrogate_density(s, targets, 1, KernelFamily::Gaussian, NormalScaleRule{});
  const auto basis = true_eigenfunctions(spec, g, 1);
  const SurrogateDensity pseudo = estimate_density_on_basis(
      s, Curve::zeros(g), basis, targets, KernelFamily::Gaussian, NormalScaleRule{});
  double num_est = 0, num_pseudo = 0, den = 0;
  for (std::size_t m = 0; m < b.size(); ++m) {
    const double truth = true_surrogate_density(spec, b[m], 1);
    num_est += std::pow(est.values[m] - truth, 2);
    num_pseudo += std::pow(pseudo.values[m] - truth, 2);
    den += truth * truth;
  }
  const double r_est = num_est / den, r_pseudo = num_pseudo / den;
  EXPECT_LT(std::abs(r_est - r_pseudo), 0.05 * r_pseudo) << r_est << " vs " << r_pseudo;
}

TEST(SurrogateDensity, NormalSetupRmsep) {
  const SineProcess spec{ScalarDist::StdNormal};
  auto g = default_grid(spec);
  Rng rng(77);
  const FunctionalSample s = sample_sine(1000, g, spec.dist, rng);
  const auto b = default_b_values(spec);
  const SurrogateDensity est = estimate_surrogate_density(
      s, target_curves(spec, g, b), 1, KernelFamily::Gaussian, NormalScaleRule{});
  double num = 0, den = 0;
  for (std::size_t m = 0; m < b.size(); ++m) {
    const double truth = scalar_density(spec.dist, b[m]);
    num += std::pow(est.values[m] - truth, 2);
    den += truth * truth;
  }
  EXPECT_GT(num / den, 0.0005);
  EXPECT_LT(num / den, 0.02);
}
