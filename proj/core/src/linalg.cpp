#include "waveuio/linalg.hpp"

#include <cmath>

#include "waveuio/errors.hpp"

namespace waveuio {

Matrix symmetrize(const Matrix& S) { return 0.5 * (S + S.transpose()); }

bool is_symmetric(const Matrix& S, double rel_tol) {
  if (S.rows() != S.cols()) return false;
  const double scale = S.norm();
  const double asym = (S - S.transpose()).norm();
  if (scale == 0.0) return true;
  return asym <= rel_tol * scale;
}

bool all_finite(const Matrix& S) { return S.allFinite(); }

EigBounds sym_eig_bounds(const Matrix& S) {
  if (S.rows() != S.cols() || S.rows() == 0) {
    throw NumericError("eigenvalue bounds need a non-empty square matrix");
  }
  if (!S.allFinite()) {
    throw NumericError("eigenvalue bounds requested for a matrix with non-finite entries");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrize(S), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericError("symmetric eigensolver did not converge");
  }
  const auto& ev = solver.eigenvalues();  // ascending
  return {ev(0), ev(ev.size() - 1)};
}

bool is_positive_definite(const Matrix& S) {
  const EigBounds b = sym_eig_bounds(S);
  return b.min > 1e-12 * std::abs(b.max) && b.min > 0.0;
}

DefinitenessCheck check_negative_definite(const Matrix& S) {
  DefinitenessCheck out;
  out.max_eig = sym_eig_bounds(S).max;
  out.threshold = -1e-12 * (1.0 + S.norm());
  out.negative_definite = out.max_eig < out.threshold;
  return out;
}

}  // namespace waveuio
