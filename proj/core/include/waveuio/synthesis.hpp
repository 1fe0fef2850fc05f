#pragma once

#include <array>
#include <string_view>
#include <utility>
#include <vector>

#include "waveuio/linalg.hpp"
#include "waveuio/model.hpp"

namespace waveuio {

/// Frobenius norms of the observer matching conditions
///
///   A1 M = M A,  B1 M = M B,  D1 M = M D,  L H = M F,
///   L K + G1 = M G,  Q + L K = 0,  L C = 0,  T M = I,
///
/// plus E - L, since the conditions above are written with E = L substituted.
struct ResidualReport {
  double a1m_ma = 0.0;
  double b1m_mb = 0.0;
  double d1m_md = 0.0;
  double lh_mf = 0.0;
  double lk_g1_mg = 0.0;
  double q_lk = 0.0;
  double lc = 0.0;
  double tm_i = 0.0;
  double e_l = 0.0;
  double max_residual = 0.0;

  static constexpr std::size_t kCount = 9;
  std::array<std::pair<std::string_view, double>, kCount> entries() const;
};

struct SynthesisSolution {
  ObserverSpec observer;
  double alpha = 0.0;  ///< M = alpha * I
  Index nullspace_dim = 0;
  ResidualReport residuals;
};

/// Orthonormal basis of {x : x^T C = 0}. Singular values at or below
/// rel_tol * sigma_max count as zero; an all-zero C has a full basis.
std::vector<Vector> left_nullspace(const Matrix& C, double rel_tol = 1e-10);

/// Observer synthesis restricted to M = alpha I.
///
/// With a scalar M the commutation conditions force A1 = A, B1 = B, D1 = D
/// and T = I / alpha. The remaining homogeneous system
///
///   L C = 0,   L H - alpha F = 0
///
/// is solved jointly in (vec(L), alpha) through the null space of its
/// Kronecker coefficient matrix. When the null space has dimension > 1 the
/// unit vector with the largest alpha component (the normalized projection of
/// the alpha axis onto the null space) is taken, then rescaled so that
/// alpha == alpha_scale. E = L, Q = -L K, G1 = alpha G - L K.
///
/// Throws InfeasibleError ("no scalar-M observer exists") if every null vector
/// has a vanishing alpha component, ConfigError if alpha_scale == 0 and
/// ShapeError on inconsistent dimensions.
SynthesisSolution solve_scalar_m(const SystemSpec& sys, double alpha_scale = 1.0);

/// Residuals of the matching conditions by direct substitution.
ResidualReport verify_equations(const SystemSpec& sys, const ObserverSpec& obs);

struct ObserverInitialState {
  Matrix z0, z1;
};

/// Inverts w_hat = T z + Q u + E y at t = 0 using T^{-1} = M:
///   z0 = M (w_hat0 - Q u0 - E y0),  z1 = M w_hat1.
/// The u'(0), y'(0) contributions to z1 are neglected.
/// Throws NumericError if M is singular.
ObserverInitialState derive_observer_initial(const Matrix& what0, const Matrix& what1,
                                             const ObserverSpec& obs, const Vector& u0,
                                             const Vector& y0);

}  // namespace waveuio
