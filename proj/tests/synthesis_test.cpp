#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "support/fixtures.hpp"
#include "waveuio/errors.hpp"
#include "waveuio/synthesis.hpp"

namespace waveuio {
namespace {

using testing::scaled_identity;
using testing::two_channel_observer;
using testing::two_channel_system;

double max_abs_diff(const Matrix& a, const Matrix& b) {
  EXPECT_EQ(a.rows(), b.rows());
  EXPECT_EQ(a.cols(), b.cols());
  return (a - b).cwiseAbs().maxCoeff();
}

TEST(LeftNullspace, RankOneCoupling) {
  Matrix C(2, 2);
  C << 0.75, -0.75, -0.75, 0.75;
  const auto basis = left_nullspace(C);
  ASSERT_EQ(basis.size(), 1u);
  const Vector& x = basis.front();
  EXPECT_NEAR(x.norm(), 1.0, 1e-14);
  // proportional to (1, 1)
  EXPECT_NEAR(std::abs(x(0)), 1.0 / std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(x(0), x(1), 1e-14);
  EXPECT_LT((x.transpose() * C).norm(), 1e-14);
}

TEST(LeftNullspace, FullRankAndZero) {
  EXPECT_TRUE(left_nullspace(Matrix::Identity(2, 2)).empty());
  EXPECT_EQ(left_nullspace(Matrix::Zero(2, 2)).size(), 2u);
}

// Dense scan of unit vectors x(theta) = (cos, sin): x^T C vanishes only
// along the computed basis direction.
TEST(LeftNullspace, AgreesWithAngularScan) {
  const Matrix C = two_channel_system().C;
  const Vector basis = left_nullspace(C).front();
  const int steps = 7200;
  int hits = 0;
  for (int k = 0; k < steps; ++k) {
    const double th = std::numbers::pi * k / steps;
    const Vector x = (Vector(2) << std::cos(th), std::sin(th)).finished();
    const double r = (x.transpose() * C).norm();
    if (r < 1e-9) {
      ++hits;
      EXPECT_NEAR(std::abs(x.dot(basis)), 1.0, 1e-12);
    } else {
      EXPECT_GT(r, 1e-4 * std::abs(std::sin(th - std::numbers::pi / 4)));
    }
  }
  EXPECT_EQ(hits, 1);  // theta = pi / 4 lies on the grid
}

TEST(SolveScalarM, ReproducesHandSolvedObserver) {
  const auto sol = solve_scalar_m(two_channel_system(), 0.95);
  const auto expected = two_channel_observer();
  const auto& o = sol.observer;
  EXPECT_LT(max_abs_diff(o.A1, expected.A1), 1e-10);
  EXPECT_LT(max_abs_diff(o.B1, expected.B1), 1e-10);
  EXPECT_LT(max_abs_diff(o.D1, expected.D1), 1e-10);
  EXPECT_LT(max_abs_diff(o.M, expected.M), 1e-10);
  EXPECT_LT(max_abs_diff(o.T, expected.T), 1e-10);
  EXPECT_LT(max_abs_diff(o.L, expected.L), 1e-10);
  EXPECT_LT(max_abs_diff(o.E, expected.E), 1e-10);
  EXPECT_LT(max_abs_diff(o.G1, expected.G1), 1e-10);
  EXPECT_LT(max_abs_diff(o.Q, expected.Q), 1e-10);
  EXPECT_DOUBLE_EQ(sol.alpha, 0.95);
  EXPECT_EQ(sol.nullspace_dim, 1);
  EXPECT_LT(sol.residuals.max_residual, 1e-12);
}

TEST(SolveScalarM, ZeroCouplingSelectsZeroGain) {
  auto s = two_channel_system();
  s.F.setZero();
  s.H.setZero();
  const auto sol = solve_scalar_m(s, 1.5);
  EXPECT_TRUE(sol.observer.L.isZero(1e-14));
  EXPECT_TRUE(sol.observer.Q.isZero(1e-14));
  EXPECT_LT(max_abs_diff(sol.observer.G1, 1.5 * s.G), 1e-14);
  EXPECT_LT(sol.residuals.max_residual, 1e-12);
}

TEST(SolveScalarM, FullRankOutputWithDisturbanceIsInfeasible) {
  auto s = two_channel_system();
  s.C = Matrix::Identity(2, 2);
  try {
    solve_scalar_m(s, 1.0);
    FAIL() << "expected InfeasibleError";
  } catch (const InfeasibleError& e) {
    EXPECT_NE(std::string(e.what()).find("no scalar-M observer exists"), std::string::npos);
  }
}

TEST(SolveScalarM, RejectsZeroScale) {
  EXPECT_THROW(solve_scalar_m(two_channel_system(), 0.0), ConfigError);
}

TEST(SolveScalarM, ScaleCovariance) {
  const auto s = two_channel_system();
  for (double a0 : {0.3, 0.95, 1.7}) {
    const auto one = solve_scalar_m(s, a0);
    const auto two = solve_scalar_m(s, 2.0 * a0);
    const auto& o1 = one.observer;
    const auto& o2 = two.observer;
    EXPECT_LT(max_abs_diff(o2.L, 2.0 * o1.L), 1e-13);
    EXPECT_LT(max_abs_diff(o2.M, 2.0 * o1.M), 1e-13);
    EXPECT_LT(max_abs_diff(o2.G1, 2.0 * o1.G1), 1e-13);
    EXPECT_LT(max_abs_diff(o2.Q, 2.0 * o1.Q), 1e-13);
    EXPECT_LT(max_abs_diff(o2.T, 0.5 * o1.T), 1e-13);
    EXPECT_LT(two.residuals.max_residual, 1e-10);
  }
}

// Brute-force scan over L = [[a, a], [b, b]] (rows in the left null space of
// C) on a 41 x 41 grid in [-2, 2]^2. For each point the best alpha in
// L H = alpha F is fitted by least squares; exact solutions must form the
// line (a, b) = (alpha, -alpha).
TEST(SolveScalarM, GridScanOfGainFamily) {
  const auto s = two_channel_system();
  const Vector f = s.F.col(0);
  std::vector<std::pair<double, double>> solutions;
  for (int i = 0; i <= 40; ++i) {
    for (int j = 0; j <= 40; ++j) {
      const double a = -2.0 + 0.1 * i;
      const double b = -2.0 + 0.1 * j;
      Matrix L(2, 2);
      L << a, a, b, b;
      ASSERT_LT((L * s.C).norm(), 1e-14);
      const Vector lh = L * s.H.col(0);
      const double alpha = lh.dot(f) / f.squaredNorm();
      if ((lh - alpha * f).norm() < 1e-12) {
        solutions.emplace_back(a, b);
        EXPECT_NEAR(alpha, a, 1e-12);
      }
    }
  }
  ASSERT_EQ(solutions.size(), 41u);
  for (const auto& [a, b] : solutions) EXPECT_NEAR(a, -b, 1e-12);

  const auto sol = solve_scalar_m(s, 0.95);
  EXPECT_NEAR(sol.observer.L(0, 0), sol.alpha, 1e-12);
  EXPECT_NEAR(sol.observer.L(1, 0), -sol.alpha, 1e-12);
}

TEST(VerifyEquations, HandSolvedPairHasZeroResiduals) {
  const auto r = verify_equations(two_channel_system(), two_channel_observer());
  for (const auto& [name, value] : r.entries()) EXPECT_LT(value, 1e-12) << name;
  EXPECT_LT(r.max_residual, 1e-12);
}

TEST(VerifyEquations, DoubledGainBreaksDisturbanceCancellation) {
  auto o = two_channel_observer();
  o.L *= 2.0;
  o.E = o.L;
  const auto s = two_channel_system();
  const auto r = verify_equations(s, o);
  // (2L) H - M F = L H: each entry 0.95 * 0.05 * 2 = 0.095 in magnitude
  EXPECT_NEAR(r.lh_mf, std::sqrt(2.0) * 0.095, 1e-12);
  EXPECT_GT(r.max_residual, 0.1);
}

TEST(VerifyEquations, IdentityObserver) {
  auto s = two_channel_system();
  s.F.setZero();
  s.H.setZero();
  const auto r = verify_equations(s, testing::identity_observer(s));
  EXPECT_EQ(r.max_residual, 0.0);
}

TEST(VerifyEquations, SmallResidualImpliesEEqualsL) {
  auto o = two_channel_observer();
  o.E(0, 1) += 1e-3;
  const auto r = verify_equations(two_channel_system(), o);
  EXPECT_NEAR(r.e_l, 1e-3, 1e-15);
  EXPECT_GE(r.max_residual, 1e-3);
}

TEST(VerifyEquations, ShapeMismatchThrows) {
  auto o = two_channel_observer();
  o.L = Matrix::Zero(2, 3);
  EXPECT_THROW(verify_equations(two_channel_system(), o), ShapeError);
}

TEST(ObserverInitial, Examples) {
  const auto o = two_channel_observer();
  const Vector u0 = Vector::Zero(1);
  const Vector y0 = Vector::Zero(2);
  const Matrix zero = Matrix::Zero(2, 5);
  EXPECT_TRUE(derive_observer_initial(zero, zero, o, u0, y0).z0.isZero(0.0));

  // w_hat0 at x = 0.5: (-2.5 cos(pi) + 2.5, -1.5 * 0.5 cos(pi/2)) = (5, 0)
  Matrix what0(2, 1);
  what0 << -2.5 * std::cos(std::numbers::pi) + 2.5, -1.5 * 0.5 * std::cos(std::numbers::pi / 2);
  const auto z = derive_observer_initial(what0, what0, o, u0, y0);
  EXPECT_NEAR(z.z0(0, 0), 4.75, 1e-14);
  EXPECT_NEAR(z.z0(1, 0), 0.0, 1e-14);

  auto o2 = o;
  o2.M = scaled_identity(2, 2.0);
  o2.Q.setZero();
  o2.E.setZero();
  const auto z2 = derive_observer_initial(Matrix::Ones(2, 1), Matrix::Ones(2, 1), o2, u0, y0);
  EXPECT_EQ(z2.z0, Matrix::Constant(2, 1, 2.0));
}

TEST(ObserverInitial, IncludesInputOutputCorrection) {
  const auto o = two_channel_observer();
  const Vector u0 = Vector::Constant(1, 0.5);
  const Vector y0 = (Vector(2) << 0.2, -0.1).finished();
  const Matrix what0 = Matrix::Ones(2, 3);
  const auto z = derive_observer_initial(what0, what0, o, u0, y0);
  // T z0 + Q u0 + E y0 reproduces w_hat0
  const Matrix back = (o.T * z.z0).colwise() + (o.Q * u0 + o.E * y0);
  EXPECT_LT((back - what0).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(ObserverInitial, SingularMThrows) {
  auto o = two_channel_observer();
  o.M.setZero();
  EXPECT_THROW(derive_observer_initial(Matrix::Ones(2, 1), Matrix::Ones(2, 1), o,
                                       Vector::Zero(1), Vector::Zero(2)),
               NumericError);
}

}  // namespace
}  // namespace waveuio
