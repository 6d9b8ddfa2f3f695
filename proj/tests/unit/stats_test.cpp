#include <gtest/gtest.h>

#include <cmath>

#include "wep/rng.hpp"
#include "wep/stats.hpp"

using namespace wep;

TEST(KsDistance, Examples) {
  const std::vector<double> a{1, 2, 3};
  const std::vector<double> b{1, 2, 4};
  EXPECT_NEAR(ks_distance(a, b), 1.0 / 3.0, 1e-15);
  EXPECT_EQ(ks_distance(a, a), 0.0);
  EXPECT_EQ(ks_distance(std::vector<double>{1, 2}, std::vector<double>{3, 4}), 1.0);
  EXPECT_NEAR(ks_distance_unsorted({3, 1, 2}, {4, 2, 1}), 1.0 / 3.0, 1e-15);
  EXPECT_THROW(ks_distance(std::vector<double>{}, a), std::domain_error);
  EXPECT_THROW(ks_distance(std::vector<double>{2, 1}, a), std::domain_error);
}

TEST(KsDistance, TiesAndUnequalSizes) {
  // F_a jumps to 1 at 1; F_b is 1/2 there.
  EXPECT_DOUBLE_EQ(ks_distance(std::vector<double>{1, 1}, std::vector<double>{1, 2}), 0.5);
  EXPECT_DOUBLE_EQ(ks_distance(std::vector<double>{0}, std::vector<double>{0, 0, 0, 1}), 0.25);
}

TEST(KsDistance, PropertySymmetricAndBounded) {
  Rng rng(51);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> a(1 + rng.below(30)), b(1 + rng.below(30));
    for (double& x : a) x = std::floor(10 * rng.uniform());
    for (double& x : b) x = std::floor(10 * rng.uniform());
    const double ab = ks_distance_unsorted(a, b);
    EXPECT_EQ(ab, ks_distance_unsorted(b, a));
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, 1.0);
    // Brute force over the integer thresholds.
    double brute = 0.0;
    for (int t = -1; t <= 10; ++t) {
      double fa = 0, fb = 0;
      for (double x : a) fa += x <= t;
      for (double x : b) fb += x <= t;
      brute = std::max(brute, std::abs(fa / a.size() - fb / b.size()));
    }
    EXPECT_NEAR(ab, brute, 1e-15);
  }
}

TEST(Quantile, Type7) {
  const std::vector<double> s{1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(quantile_sorted(s, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(quantile_sorted(s, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(quantile_sorted(s, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(quantile_sorted(s, 0.25), 1.75);
  EXPECT_DOUBLE_EQ(quantile({4, 1, 3, 2}, 0.5), 2.5);
  EXPECT_THROW(quantile_sorted(s, 1.5), std::domain_error);
}

TEST(Moments, MeanVarianceAndErrors) {
  const std::vector<double> v{1, 2, 3, 4};
  const MeanEstimate m = mean_and_se(v);
  EXPECT_DOUBLE_EQ(m.mean, 2.5);
  EXPECT_NEAR(m.se, std::sqrt(5.0 / 3.0 / 4.0), 1e-15);
  EXPECT_NEAR(variance_and_se(v).variance, 5.0 / 3.0, 1e-15);

  Rng rng(52);
  std::vector<double> normals(100000);
  for (double& x : normals) x = rng.normal();
  const VarianceEstimate ve = variance_and_se(normals);
  EXPECT_NEAR(ve.variance, 1.0, 3 * ve.se);
  // se of the sample variance of N(0,1) is about sqrt(2 / n).
  EXPECT_NEAR(ve.se, std::sqrt(2.0 / normals.size()), 1e-3);
}
