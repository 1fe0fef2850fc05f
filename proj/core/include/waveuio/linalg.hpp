#pragma once

#include <Eigen/Dense>

namespace waveuio {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Relative Frobenius tolerance used by the symmetry gate.
inline constexpr double kSymmetryTol = 1e-10;

/// Extreme eigenvalues of a symmetric matrix.
struct EigBounds {
  double min = 0.0;
  double max = 0.0;
};

/// (S + S^T) / 2.
Matrix symmetrize(const Matrix& S);

/// ||S - S^T||_F <= tol * ||S||_F. Non-square matrices are never symmetric.
bool is_symmetric(const Matrix& S, double rel_tol = kSymmetryTol);

/// Extreme eigenvalues of the symmetrized matrix. Throws NumericError on
/// non-finite entries or a non-square argument.
EigBounds sym_eig_bounds(const Matrix& S);

/// lambda_min > 1e-12 * |lambda_max| after symmetrization.
bool is_positive_definite(const Matrix& S);

/// Strict negative definiteness with a margin: the largest eigenvalue of the
/// symmetrized matrix must lie below -1e-12 * (1 + ||S||_F).
struct DefinitenessCheck {
  double max_eig = 0.0;
  double threshold = 0.0;
  bool negative_definite = false;
};

DefinitenessCheck check_negative_definite(const Matrix& S);

bool all_finite(const Matrix& S);

}  // namespace waveuio
