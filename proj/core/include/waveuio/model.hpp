#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "waveuio/linalg.hpp"

namespace waveuio {

// ---------------------------------------------------------------------------
// Nonlinearity catalog
// ---------------------------------------------------------------------------

enum class NonlinearityKind { Zero, ComponentSine, ComponentTanh };

std::string_view to_string(NonlinearityKind kind);
NonlinearityKind nonlinearity_kind_from_string(std::string_view name);

/// Componentwise globally Lipschitz nonlinearity f_i(w) = a_i * g(w_i).
struct NonlinearitySpec {
  NonlinearityKind kind = NonlinearityKind::Zero;
  Vector amplitudes;  ///< length n; ignored for Zero

  static NonlinearitySpec zero() { return {}; }
  static NonlinearitySpec sine(Vector amplitudes);
  static NonlinearitySpec tanh(Vector amplitudes);

  /// 0 for Zero, max|a_i| otherwise. Both sin and tanh have unit slope bound.
  double lipschitz_constant() const;
};

Vector eval_nonlinearity(const NonlinearitySpec& spec, const Vector& w);

/// Applies f column by column to an n x m field, i.e. pointwise in x.
Matrix eval_nonlinearity_field(const NonlinearitySpec& spec, const Matrix& field);

// ---------------------------------------------------------------------------
// Plant
// ---------------------------------------------------------------------------

/// Coupled semilinear wave system on the unit interval:
///
///   w_tt = A w_xx - B w_t - D w + f(w) + G u + F d
///   w_x(0,t) = C1 w_t(0,t),   w_x(1,t) = 0
///   y = C int_0^1 w dx + K u + H d
struct SystemSpec {
  Index n = 0;      ///< number of coupled equations
  Index p = 0;      ///< known input dimension
  Index d_dim = 0;  ///< unknown input dimension
  Index q = 0;      ///< output dimension

  Matrix A, B, D, C1;  // n x n
  Matrix C;            // q x n
  Matrix G;            // n x p
  Matrix F;            // n x d_dim
  Matrix K;            // q x p
  Matrix H;            // q x d_dim

  NonlinearitySpec nonlinearity;
  double gamma = 0.0;  ///< declared Lipschitz constant of `nonlinearity`
};

struct ValidationReport {
  std::vector<std::string> violations;
  /// Deviations from the modelling assumptions that do not block use.
  std::vector<std::string> warnings;

  bool ok() const { return violations.empty(); }
};

/// Checks shapes, symmetry and definiteness of A, B, D, C1, and that gamma
/// matches the catalog Lipschitz constant. Never throws.
///
/// C1 must be symmetric; an indefinite C1 only yields a warning because the
/// reference two-channel example uses an off-diagonal (indefinite) C1.
ValidationReport validate_system(const SystemSpec& sys);

/// Throws ShapeError unless every matrix matches (n, p, q, d_dim).
void require_consistent_shapes(const SystemSpec& sys);

// ---------------------------------------------------------------------------
// Observer and certificate
// ---------------------------------------------------------------------------

/// Observer
///
///   z_tt = A1 z_xx - B1 z_t - D1 z + M f(w_hat) + G1 u + L y
///   w_hat = T z + Q u + E y
///   z_x(0,t) = M w_x(0,t),   z_x(1,t) = M w_x(1,t)
struct ObserverSpec {
  Matrix A1, B1, D1, M, T;  // n x n
  Matrix G1;                // n x p
  Matrix L, E;              // n x q
  Matrix Q;                 // n x p
};

/// Throws ShapeError if the observer does not fit the system dimensions.
void require_consistent_shapes(const SystemSpec& sys, const ObserverSpec& obs);

/// Lyapunov / H-infinity parameters. `mu` is absent for stability-only use.
struct Certificate {
  Matrix P;
  Matrix Gamma;
  double delta = 0.0;
  std::optional<double> mu;

  /// P = p I, Gamma = g I.
  static Certificate scalar(Index n, double p, double g, double delta,
                            std::optional<double> mu = std::nullopt);
};

// ---------------------------------------------------------------------------
// Signals
// ---------------------------------------------------------------------------

enum class DisturbanceKind { Zero, Constant, DampedSine, Sampled };

std::string_view to_string(DisturbanceKind kind);
DisturbanceKind disturbance_kind_from_string(std::string_view name);

/// Unknown input d(t). DampedSine yields a * exp(-b t) * sin(c t) in every
/// component. Sampled interpolates linearly and clamps outside its table.
struct DisturbanceSpec {
  DisturbanceKind kind = DisturbanceKind::Zero;
  Index dim = 0;

  double amplitude = 0.0;  // DampedSine a
  double decay = 0.0;      // DampedSine b
  double omega = 0.0;      // DampedSine c
  Vector constant;         // Constant

  std::vector<double> times;   // Sampled, strictly increasing
  std::vector<Vector> values;  // Sampled, one length-dim vector per time

  static DisturbanceSpec zero(Index dim);
  static DisturbanceSpec constant_value(Vector value);
  static DisturbanceSpec damped_sine(Index dim, double a, double b, double c);
  static DisturbanceSpec sampled(std::vector<double> times, std::vector<Vector> values);

  bool identically_zero() const;
};

/// Throws ConfigError for t < 0 or an empty Sampled table.
Vector eval_disturbance(const DisturbanceSpec& spec, double t);

enum class ControlKind { Zero, IntegralStateFeedback };

std::string_view to_string(ControlKind kind);
ControlKind control_kind_from_string(std::string_view name);

/// Known input u(t). IntegralStateFeedback: u = -K1 * int_0^1 w dx.
struct ControlSpec {
  ControlKind kind = ControlKind::Zero;
  Index dim = 0;  ///< p
  Matrix K1;      ///< p x n

  static ControlSpec zero(Index p);
  static ControlSpec integral_feedback(Matrix K1);

  /// `w_integral` is the spatial mean of w (length n).
  Vector eval(const Vector& w_integral) const;
};

// ---------------------------------------------------------------------------
// Initial data
// ---------------------------------------------------------------------------

enum class ObserverInitForm {
  Estimate,  ///< (w_hat0, w_hat1) supplied; z is derived from them
  Internal,  ///< (z0, z1) supplied directly
};

/// Grid-sampled initial fields, each n x (N+1) with row i holding component i.
struct InitialData {
  Matrix w0, w1;
  ObserverInitForm observer_form = ObserverInitForm::Estimate;
  Matrix observer0, observer1;  ///< w_hat0/w_hat1 or z0/z1 per observer_form
};

/// Throws ConfigError unless every field is n x cols and finite.
void require_valid_initial_data(const InitialData& ic, Index n, Index cols);

}  // namespace waveuio
