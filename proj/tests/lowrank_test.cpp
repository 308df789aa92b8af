#include "c2g/lowrank.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace c2g {
namespace {

Plane random_plane(std::mt19937_64& rng, int h, int w) {
  std::normal_distribution<double> n(0.0, 1.0);
  Plane p(h, w);
  for (Eigen::Index i = 0; i < p.size(); ++i) p.data()[i] = n(rng);
  return p;
}

SvdFactors factors_with(std::initializer_list<double> values) {
  SvdFactors f;
  const auto n = static_cast<Eigen::Index>(values.size());
  f.u = Eigen::MatrixXd::Identity(n, n);
  f.v = Eigen::MatrixXd::Identity(n, n);
  f.s = Eigen::VectorXd(n);
  Eigen::Index i = 0;
  for (double v : values) f.s[i++] = v;
  return f;
}

TEST(SvdDecompose, IdentityHasUnitSpectrum) {
  const SvdFactors f = svd_decompose(Plane::Identity(2, 2));
  ASSERT_EQ(f.s.size(), 2);
  EXPECT_NEAR(f.s[0], 1.0, 1e-14);
  EXPECT_NEAR(f.s[1], 1.0, 1e-14);
}

TEST(SvdDecompose, RankOneMatrix) {
  // Gram matrix [[5,10],[10,20]] has eigenvalues 25 and 0, so S = (5, 0).
  Plane m(2, 2);
  m << 1, 2, 2, 4;
  const SvdFactors f = svd_decompose(m);
  EXPECT_NEAR(f.s[0], 5.0, 1e-12);
  EXPECT_NEAR(f.s[1], 0.0, 1e-12);
  EXPECT_EQ(numerical_rank(f, 1e-12), 1);
  const Plane r = reconstruct(f, RankPolicy::fixed(1));
  EXPECT_LE((r - m).norm(), 1e-12);
}

TEST(SvdDecompose, ReconstructsRandomRectangular) {
  std::mt19937_64 rng(11);
  const Plane m = random_plane(rng, 8, 6);
  const SvdFactors f = svd_decompose(m);
  ASSERT_EQ(f.u.rows(), 8);
  ASSERT_EQ(f.v.rows(), 6);
  const Eigen::MatrixXd back = f.u * f.s.asDiagonal() * f.v.transpose();
  EXPECT_LE((back - Eigen::MatrixXd(m)).norm(), 1e-10);
}

TEST(SvdDecompose, RejectsNonFinite) {
  Plane m = Plane::Zero(3, 3);
  m(1, 2) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(svd_decompose(m), std::invalid_argument);
  EXPECT_THROW(svd_decompose(Plane(0, 0)), std::invalid_argument);
}

TEST(NumericalRank, CountsAboveRelativeThreshold) {
  EXPECT_EQ(numerical_rank(factors_with({5, 0}), 1e-12), 1);
  EXPECT_EQ(numerical_rank(factors_with({1, 1}), 1e-12), 2);
  EXPECT_EQ(numerical_rank(factors_with({10, 1e-3, 1e-15}), 1e-10), 2);
  EXPECT_EQ(numerical_rank(factors_with({0, 0}), 1e-12), 0);
  EXPECT_THROW(numerical_rank(factors_with({1}), 0.0), std::invalid_argument);
}

TEST(Reconstruct, EnergyFractionPicksSmallestSufficientRank) {
  const SvdFactors f = factors_with({3, 2, 1});  // energies 9, 4, 1 of 14
  EXPECT_EQ(retained_rank(f, RankPolicy::energy(0.5)), 1);
  EXPECT_EQ(retained_rank(f, RankPolicy::energy(0.9)), 2);
  EXPECT_EQ(retained_rank(f, RankPolicy::energy(1.0)), 3);
  EXPECT_EQ(retained_rank(factors_with({0, 0}), RankPolicy::energy(0.5)), 0);
  EXPECT_EQ(reconstruct(factors_with({0, 0}), RankPolicy::energy(0.5)).norm(), 0.0);
}

TEST(Reconstruct, FixedKIsCappedAtAvailableRank) {
  EXPECT_EQ(retained_rank(factors_with({3, 2}), RankPolicy::fixed(10)), 2);
}

TEST(Reconstruct, FullNumericalRankIsIdentity) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const Plane m = random_plane(rng, 5 + trial, 12 - trial);
    const Plane r = reconstruct(svd_decompose(m), RankPolicy::full());
    EXPECT_LE((r - m).norm() / m.norm(), 1e-8);
  }
}

TEST(LowrankProperty, EckartYoungAndOrthonormality) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> dim(2, 64);
  for (int trial = 0; trial < 50; ++trial) {
    const int h = dim(rng), w = dim(rng);
    const Plane m = random_plane(rng, h, w);
    const SvdFactors f = svd_decompose(m);
    const int r = static_cast<int>(f.s.size());
    for (int i = 1; i < r; ++i) ASSERT_LE(f.s[i], f.s[i - 1]);
    ASSERT_GE(f.s.minCoeff(), 0.0);
    EXPECT_LE((f.u.transpose() * f.u - Eigen::MatrixXd::Identity(r, r)).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_LE((f.v.transpose() * f.v - Eigen::MatrixXd::Identity(r, r)).cwiseAbs().maxCoeff(), 1e-8);

    const int k = std::uniform_int_distribution<int>(1, std::max(1, r - 1))(rng);
    const double err = (m - reconstruct(f, RankPolicy::fixed(k))).norm();
    const double dropped = std::sqrt(f.s.tail(r - k).squaredNorm());
    if (dropped > 0) {
      EXPECT_LE(std::abs(err - dropped) / dropped, 1e-8) << h << "x" << w << " k=" << k;
    } else {
      EXPECT_LE(err, 1e-10 * m.norm());
    }
  }
}

TEST(RankPolicy, ParsesAndPrints) {
  EXPECT_EQ(RankPolicy::parse("full"), RankPolicy::full());
  EXPECT_EQ(RankPolicy::parse("k=3"), RankPolicy::fixed(3));
  EXPECT_EQ(RankPolicy::parse("energy=0.9"), RankPolicy::energy(0.9));
  EXPECT_EQ(RankPolicy::fixed(4).to_string(), "k=4");
  EXPECT_THROW(RankPolicy::parse("k=0"), std::invalid_argument);
  EXPECT_THROW(RankPolicy::parse("k=x"), std::invalid_argument);
  EXPECT_THROW(RankPolicy::parse("energy=1.5"), std::invalid_argument);
  EXPECT_THROW(RankPolicy::parse("half"), std::invalid_argument);
}

}  // namespace
}  // namespace c2g
