#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "oracle.hpp"

// Frozen reference values; the oracles must reproduce them exactly (or to
// the stated tolerance) before they are trusted to check the library.

TEST(OracleFrozen, CreluChainClosedForm) {
  EXPECT_DOUBLE_EQ(oracle::crelu_chain_map(1.0, 0.0), 0.5);
  EXPECT_NEAR(oracle::crelu_chain_map(0.85, 0.25), 0.1, 1e-15);
  EXPECT_DOUBLE_EQ(oracle::crelu_chain_map(0.3, -0.45), 0.25);
  EXPECT_NEAR(oracle::crelu_chain_map(1.2, 0.25), 0.45, 1e-15);
  EXPECT_DOUBLE_EQ(oracle::crelu_chain_map(0.62, 0.0), 0.12);
  EXPECT_DOUBLE_EQ(oracle::crelu_chain_map(-0.7, 0.4), 0.0);
  EXPECT_DOUBLE_EQ(oracle::crelu_chain_map(2.5, 0.25), 0.5);
}

TEST(OracleFrozen, MirroredPairClosedForm) {
  EXPECT_DOUBLE_EQ(oracle::mirrored_pair_map(0.0), 0.9835328031550675);
  EXPECT_DOUBLE_EQ(oracle::mirrored_pair_map(0.8), 0.9669924638574783);
  EXPECT_DOUBLE_EQ(oracle::mirrored_pair_map(-1.3), 0.9990916441768739);
  EXPECT_DOUBLE_EQ(oracle::mirrored_pair_map(2.4), 0.9640535805109034);
  for (double t : {0.0, 0.8, -1.3, 2.4, -5.5})
    EXPECT_NEAR(oracle::mirrored_pair_map(t), oracle::mirrored_pair_reduced_map(t), 1e-15);
}

TEST(OracleFrozen, ConstantFoldClosedForm) {
  EXPECT_DOUBLE_EQ(oracle::constant_fold_map(0.0), 0.999999772692575);
  EXPECT_DOUBLE_EQ(oracle::constant_fold_map(-3.2), 0.9209207586738866);
  EXPECT_DOUBLE_EQ(oracle::constant_fold_map(-4.0), -0.004945206000904265);
}

TEST(OracleFrozen, ResidueCircleOnTanh) {
  auto f = [](std::complex<double> z) { return std::tanh(z); };
  std::complex<double> p(0.0, ffsym::kPi / 2.0);
  EXPECT_NEAR(std::abs(oracle::residue_circle(f, p) - 1.0), 0.0, 1e-7);

  // Scaled argument: residue of 2 tanh(z/2 + 1/4) at the mapped pole is 4.
  auto g = [](std::complex<double> z) { return 2.0 * std::tanh(0.5 * z + 0.25); };
  std::complex<double> q = (std::complex<double>(0.0, ffsym::kPi / 2.0) - 0.25) / 0.5;
  EXPECT_NEAR(std::abs(oracle::residue_circle(g, q) - 4.0), 0.0, 1e-7);
}

TEST(OracleFrozen, ClusterDepthReferenceClouds) {
  std::vector<std::complex<double>> tail;
  for (int n = 1; n <= 1000; ++n) tail.emplace_back(1.0 / n, 0.0);
  tail.emplace_back(0.0, 0.0);
  for (int j = 0; j <= 6; ++j) {
    double eps = 0.5 * std::pow(2.0, -j);
    EXPECT_EQ(oracle::cluster_depth_naive(tail, eps), 2) << "eps " << eps;
  }

  EXPECT_EQ(oracle::cluster_depth_naive({}, 0.5), 0);
  EXPECT_EQ(oracle::cluster_depth_naive({{0, 0}, {10, 0}, {20, 0}}, 0.5), 1);
  std::vector<std::complex<double>> blob{{0, 0}, {0.01, 0}, {0.02, 0}, {0.03, 0}, {0.04, 0}};
  EXPECT_EQ(oracle::cluster_depth_naive(blob, 0.5), 2);

  // Two separate accumulation fans behave like one level of clustering each.
  std::vector<std::complex<double>> fans;
  for (int k = 3; k < 80; ++k) {
    fans.emplace_back(0.16 / k, 0.0);
    fans.emplace_back(5.0 + 0.16 / k, 0.0);
  }
  EXPECT_EQ(oracle::cluster_depth_naive(fans, 0.03125), 2);
}

TEST(OracleFrozen, DensityIntegerLattice) {
  std::vector<std::complex<double>> lattice;
  for (int k = -10000; k <= 10000; ++k) lattice.emplace_back(double(k), 0.0);
  double d = oracle::density_naive(lattice, {0, 0}, {1, 0}, 0.25, 10000.0);
  EXPECT_DOUBLE_EQ(d, 1.00005);
}

TEST(OracleFrozen, DensityIrrationalTrend) {
  // P = pi(Z + 1/2) vertical values vs F = same over sqrt(2): per-window
  // densities at eps = window^{-1/2} must strictly decrease.
  auto coincidence = [](double ratio, double window) {
    std::vector<std::complex<double>> P;
    int kmax = int(window / ffsym::kPi) + 2;
    for (int k = -kmax; k <= kmax; ++k) {
      double y = ffsym::kPi * (k + 0.5);
      if (std::fabs(y) <= window) P.emplace_back(0.0, y);
    }
    double eps = 1.0 / std::sqrt(window);
    int count = 0;
    for (const auto& p : P) {
      double y = p.imag();
      long long j = std::llround(y * ratio / ffsym::kPi - 0.5);
      double best = 1e300;
      for (long long dj = -1; dj <= 1; ++dj)
        best = std::min(best, std::fabs(y - ffsym::kPi * (j + dj + 0.5) / ratio));
      if (best <= eps) ++count;
    }
    return count / (2.0 * window);
  };
  double s2 = std::sqrt(2.0);
  double d2 = coincidence(s2, 1e2), d3 = coincidence(s2, 1e3), d4 = coincidence(s2, 1e4);
  EXPECT_DOUBLE_EQ(d2, 0.03);
  EXPECT_DOUBLE_EQ(d3, 0.009);
  EXPECT_DOUBLE_EQ(d4, 0.0028);
  EXPECT_GT(d2, d3);
  EXPECT_GT(d3, d4);
  // Odd rational ratio keeps a bounded-below coincidence density.
  for (double w : {1e2, 1e3, 1e4}) EXPECT_GT(coincidence(3.0, w), 0.3);
}
