#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "waveuio/linalg.hpp"
#include "waveuio/model.hpp"

namespace waveuio {

/// Courant numbers above this draw a warning. Classical RK4 reaches the
/// imaginary axis up to 2 sqrt(2) ~ 2.83, so runs between the two limits rely
/// on the damping terms for stability.
inline constexpr double kCourantLimit = 2.8;
/// Courant numbers above this are rejected unless override_cfl is set.
inline constexpr double kCourantHardLimit = 3.0;
/// Any recorded norm above this aborts the run.
inline constexpr double kDivergenceNorm = 1e8;

/// Uniform grid x_i = i / nx, i = 0..nx, and the time horizon.
struct GridConfig {
  Index nx = 100;
  double dt = 0.01;
  double t_final = 10.0;
  Index snapshot_stride = 10;  ///< 0 disables snapshots
  bool override_cfl = false;

  double h() const { return 1.0 / static_cast<double>(nx); }
  Index points() const { return nx + 1; }
  long steps() const;
};

/// Throws ConfigError unless nx >= 4, dt > 0 and t_final >= dt.
void validate_grid(const GridConfig& grid);

/// 2 sqrt(lambda_max(A)) dt / h: the largest semi-discrete wave frequency
/// times dt. The Neumann ghost-point Laplacian has spectral radius 4 / h^2.
double courant_number(const SystemSpec& sys, const GridConfig& grid);

// ---------------------------------------------------------------------------
// Quadrature on the uniform grid
// ---------------------------------------------------------------------------

/// Composite trapezoid rule over [0, 1] for every row of an n x (N+1) field.
Vector trapezoid_integral(const Matrix& field);

/// sqrt( int_0^1 |field(x)|^2 dx ) with the trapezoid rule.
double l2_norm(const Matrix& field);

/// int_0^1 a(x)^T S b(x) dx with the trapezoid rule.
double quadratic_integral(const Matrix& a, const Matrix& S, const Matrix& b);

/// Centered first differences; second-order one-sided at both ends.
Matrix spatial_gradient(const Matrix& field);

/// Second differences with ghost points eliminated by
///   f_x(0) = left_slope,  f_x(1) = 0.
Matrix neumann_laplacian(const Matrix& field, const Vector& left_slope);

// ---------------------------------------------------------------------------
// Coupled plant/observer state
// ---------------------------------------------------------------------------

/// Stacked (w, v, z, zeta) on n x (N+1) grids, v = w_t and zeta = z_t.
class SimState {
 public:
  SimState() = default;
  SimState(Index n, Index points, double t = 0.0);

  using Field = Eigen::Map<Matrix>;
  using ConstField = Eigen::Map<const Matrix>;

  Field w() { return field(0); }
  Field v() { return field(1); }
  Field z() { return field(2); }
  Field zeta() { return field(3); }
  ConstField w() const { return field(0); }
  ConstField v() const { return field(1); }
  ConstField z() const { return field(2); }
  ConstField zeta() const { return field(3); }

  Vector& data() { return data_; }
  const Vector& data() const { return data_; }
  Index n() const { return n_; }
  Index points() const { return points_; }
  double h() const { return 1.0 / static_cast<double>(points_ - 1); }

  double t = 0.0;

 private:
  Field field(Index k) { return {data_.data() + k * n_ * points_, n_, points_}; }
  ConstField field(Index k) const { return {data_.data() + k * n_ * points_, n_, points_}; }

  Index n_ = 0;
  Index points_ = 0;
  Vector data_;
};

/// Inputs and outputs at one instant, all recomputed from the plant field.
struct Signals {
  Vector w_mean;  ///< int_0^1 w dx
  Vector u;
  Vector d;
  Vector y;
};

Signals compute_signals(const Matrix& w, const SystemSpec& sys, const ControlSpec& control,
                        const DisturbanceSpec& dist, double t);

/// w_hat = T z + Q u + E y, pointwise in x.
Matrix estimate_field(const Matrix& z, const ObserverSpec& obs, const Signals& s);

struct FieldRates {
  Matrix position;  ///< time derivative of w (resp. z)
  Matrix velocity;  ///< time derivative of v (resp. zeta)
};

/// w_t = v,  v_t = A w_xx - B v - D w + f(w) + G u + F d,
/// with w_x(0) = C1 v(0) and w_x(1) = 0 imposed through ghost points.
FieldRates plant_rhs(const SimState& state, const SystemSpec& sys, const ControlSpec& control,
                     const DisturbanceSpec& dist, double t);

/// z_t = zeta,  zeta_t = A1 z_xx - B1 zeta - D1 z + M f(w_hat) + G1 u + L y,
/// with z_x(0) = M C1 v(0) (the plant's boundary slope) and z_x(1) = 0.
FieldRates observer_rhs(const SimState& state, const SystemSpec& sys, const ObserverSpec& obs,
                        const ControlSpec& control, const DisturbanceSpec& dist, double t);

using OdeRhs = std::function<Vector(double t, const Vector& y)>;

/// One classical fourth-order Runge-Kutta step. Throws DivergenceError naming
/// `step_index` if the result is not finite.
Vector rk4_step(const Vector& y, double t, double dt, const OdeRhs& rhs, long step_index = 0);

/// Right-hand side of the stacked plant + observer system. Signals are
/// recomputed from whatever state is passed in, so every RK stage is
/// self-consistent.
OdeRhs coupled_rhs(const SystemSpec& sys, const ObserverSpec& obs, const ControlSpec& control,
                   const DisturbanceSpec& dist, Index points);

// ---------------------------------------------------------------------------
// Lyapunov functional
// ---------------------------------------------------------------------------

/// Xi = 1/2 int eps_x^T P A1 eps_x + 1/2 int eps_t^T P eps_t
///      + delta int eps^T P eps_t + 1/2 int eps^T P D1 eps
Matrix transformation_error(const SimState& state, const ObserverSpec& obs);
Matrix transformation_error_rate(const SimState& state, const ObserverSpec& obs);

double lyapunov_xi(const Matrix& eps, const Matrix& eps_t, const ObserverSpec& obs,
                   const Certificate& cert);
double lyapunov_xi(const SimState& state, const ObserverSpec& obs, const Certificate& cert);

struct SandwichConstants {
  double lower = 0.0;
  double upper = 0.0;
};

/// Coercivity / boundedness constants of Xi with respect to
/// ||eps_x||^2 + ||eps_t||^2 + ||eps||^2. Throws NumericError when delta
/// violates the admissibility bound.
SandwichConstants sandwich_constants(const ObserverSpec& obs, const Certificate& cert);

// ---------------------------------------------------------------------------
// Simulation
// ---------------------------------------------------------------------------

struct Snapshot {
  double t = 0.0;
  Matrix w, what, e, z;
};

struct SimResult {
  std::vector<double> x;
  std::vector<double> times;
  std::vector<double> e_norm;    ///< ||w_hat - w||_L2
  std::vector<double> eps_norm;  ///< ||z - M w||_L2
  std::vector<double> xi;        ///< empty without a certificate
  std::vector<double> d_norm;    ///< |d(t)|
  std::vector<double> int_e_sq;  ///< running int ||e||^2 dt
  std::vector<double> int_d_sq;  ///< running int |d|^2 dt
  std::vector<Snapshot> snapshots;
  std::optional<double> hinf_ratio;  ///< absent when d == 0
  double courant = 0.0;
  std::vector<std::string> warnings;
};

using StepCallback =
    std::function<void(long step, const SimState& state, const Signals& signals)>;

struct SimulationSetup {
  SystemSpec system;
  ObserverSpec observer;
  InitialData initial;
  ControlSpec control;
  DisturbanceSpec disturbance;
  GridConfig grid;
  std::optional<Certificate> certificate;  ///< enables Xi recording
};

/// Builds the t = 0 state, deriving z from (w_hat0, w_hat1) when needed.
SimState initial_state(const SimulationSetup& setup);

/// Marches plant and observer from 0 to t_final. Throws ConfigError when the
/// Courant number exceeds kCourantHardLimit without override_cfl, and
/// DivergenceError on non-finite values or norms above kDivergenceNorm.
SimResult simulate(const SimulationSetup& setup, const StepCallback& on_step = {});

/// int ||e||^2 dt / int |d|^2 dt over the recorded times, both trapezoidal.
/// Throws NumericError when the disturbance energy is zero.
double hinf_ratio(const SimResult& result);

}  // namespace waveuio
