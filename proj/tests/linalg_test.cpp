#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "support/fixtures.hpp"
#include "waveuio/errors.hpp"
#include "waveuio/linalg.hpp"

namespace waveuio {
namespace {

TEST(SymEigBounds, ScalarMatrix) {
  const auto b = sym_eig_bounds(2.5 * Matrix::Identity(2, 2));
  EXPECT_DOUBLE_EQ(b.min, 2.5);
  EXPECT_DOUBLE_EQ(b.max, 2.5);
}

TEST(SymEigBounds, TwoByTwoAgainstQuadraticFormula) {
  Matrix S(2, 2);
  S << -17.375, 2.375, 2.375, -0.776085;
  const auto b = sym_eig_bounds(S);
  const double tr = S.trace();
  const double disc = std::sqrt(tr * tr - 4.0 * S.determinant());
  EXPECT_NEAR(b.max, 0.5 * (tr + disc), 1e-12);
  EXPECT_NEAR(b.min, 0.5 * (tr - disc), 1e-12);
  EXPECT_NEAR(b.min, -17.708, 1e-3);
  EXPECT_NEAR(b.max, -0.443, 5e-4);
}

TEST(SymEigBounds, DiagonalProduct) {
  const Matrix PD1 = (2.5 * Matrix::Identity(2, 2)) * (4.5 * Matrix::Identity(2, 2));
  const auto b = sym_eig_bounds(PD1);
  EXPECT_DOUBLE_EQ(b.min, 11.25);
  EXPECT_DOUBLE_EQ(b.max, 11.25);
}

TEST(SymEigBounds, UsesSymmetricPart) {
  Matrix S(2, 2);
  S << 1.0, 4.0, 0.0, 1.0;  // symmetric part [[1,2],[2,1]]
  const auto b = sym_eig_bounds(S);
  EXPECT_NEAR(b.min, -1.0, 1e-14);
  EXPECT_NEAR(b.max, 3.0, 1e-14);
}

TEST(SymEigBounds, RejectsNonFiniteAndNonSquare) {
  Matrix S = Matrix::Identity(2, 2);
  S(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(sym_eig_bounds(S), NumericError);
  EXPECT_THROW(sym_eig_bounds(Matrix::Zero(2, 3)), NumericError);
}

TEST(SymEigBounds, MatchesClosedFormOnRandomThreeByThree) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const Matrix S = testing::random_symmetric(3, rng);
    EXPECT_NEAR(sym_eig_bounds(S).max, testing::max_eig_3x3(S), 1e-10);
  }
}

TEST(Symmetry, RelativeFrobeniusGate) {
  Matrix S(2, 2);
  S << 1.0, 2.0, 2.0 + 1e-12, 1.0;
  EXPECT_TRUE(is_symmetric(S));
  S(1, 0) = 2.1;
  EXPECT_FALSE(is_symmetric(S));
  EXPECT_FALSE(is_symmetric(Matrix::Zero(2, 3)));
}

TEST(Definiteness, PositiveDefiniteGate) {
  EXPECT_TRUE(is_positive_definite(Matrix::Identity(3, 3)));
  Matrix S(2, 2);
  S << 0.0, 0.25, 0.25, 0.0;
  EXPECT_FALSE(is_positive_definite(S));
  EXPECT_FALSE(is_positive_definite(Matrix::Zero(2, 2)));
}

TEST(Definiteness, ZeroEigenvalueIsNotNegativeDefinite) {
  Matrix S = -Matrix::Identity(2, 2);
  S(1, 1) = 0.0;
  const auto c = check_negative_definite(S);
  EXPECT_FALSE(c.negative_definite);
  EXPECT_DOUBLE_EQ(c.max_eig, 0.0);
  EXPECT_LT(c.threshold, 0.0);
}

TEST(Definiteness, AgreesWithCharacteristicPolynomial) {
  std::mt19937_64 rng(11);
  int negative = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const Index n = 2 + trial % 2;
    // shift towards negative so both verdicts occur often
    const Matrix S = testing::random_symmetric(n, rng) - 0.8 * Matrix::Identity(n, n);
    const double lmax = n == 2 ? testing::max_eig_2x2(S) : testing::max_eig_3x3(S);
    if (std::abs(lmax) < 1e-6) continue;
    const bool expected = testing::charpoly_negative_definite(S);
    EXPECT_EQ(check_negative_definite(S).negative_definite, expected) << S;
    negative += expected ? 1 : 0;
  }
  EXPECT_GT(negative, 100);
  EXPECT_LT(negative, 1900);
}

}  // namespace
}  // namespace waveuio
