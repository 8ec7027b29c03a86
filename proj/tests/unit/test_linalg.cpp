#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "smbp/linalg.hpp"
#include "smbp/random.hpp"

using namespace smbp;

TEST(Jacobi, ThreeByThree) {
  Matrix a(3, 3);
  const double v[9] = {4, 1, 2, 1, 3, 0.5, 2, 0.5, 5};
  for (int i = 0; i < 9; ++i) a(i / 3, i % 3) = v[i];
  SymmetricEigen e = jacobi_eigen(a);
  std::vector<double> vals = e.values;
  std::sort(vals.begin(), vals.end());
  // numpy.linalg.eigvalsh
  EXPECT_NEAR(vals[0], 2.09652162, 1e-8);
  EXPECT_NEAR(vals[1], 3.07222395, 1e-8);
  EXPECT_NEAR(vals[2], 6.83125443, 1e-8);
}

TEST(Jacobi, ReconstructsRandomMatrix) {
  const std::size_t p = 30;
  Rng rng(11);
  Matrix a(p, p);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i; j < p; ++j) a(i, j) = a(j, i) = rng.normal();
  }
  SymmetricEigen e = jacobi_eigen(a);
  double err = 0.0;
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      double r = 0.0;
      double dot = 0.0;
      for (std::size_t k = 0; k < p; ++k) {
        r += e.vectors(i, k) * e.values[k] * e.vectors(j, k);
        dot += e.vectors(k, i) * e.vectors(k, j);
      }
      err = std::max(err, std::abs(r - a(i, j)));
      EXPECT_NEAR(dot, i == j ? 1.0 : 0.0, 1e-12);
    }
  }
  EXPECT_LT(err, 1e-10);
}

TEST(Jacobi, DiagonalNeedsNoSweep) {
  Matrix a(3, 3);
  a(0, 0) = 1;
  a(1, 1) = 5;
  a(2, 2) = -2;
  SymmetricEigen e = jacobi_eigen(a);
  EXPECT_EQ(e.sweeps, 0u);
  EXPECT_EQ(e.values[1], 5.0);
}

TEST(Matrix, AsymmetryAndTranspose) {
  Matrix a(2, 2);
  a(0, 1) = 1.0;
  a(1, 0) = 0.75;
  EXPECT_DOUBLE_EQ(asymmetry(a), 0.25);
  EXPECT_EQ(a.transpose()(0, 1), 0.75);
}
