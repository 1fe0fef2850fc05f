#include "waveuio/wavesim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "waveuio/certificates.hpp"
#include "waveuio/errors.hpp"
#include "waveuio/synthesis.hpp"

namespace waveuio {

long GridConfig::steps() const { return std::lround(t_final / dt); }

void validate_grid(const GridConfig& grid) {
  if (grid.nx < 4) throw ConfigError("grid: nx must be at least 4");
  if (!(grid.dt > 0.0) || !std::isfinite(grid.dt)) throw ConfigError("grid: dt must be positive");
  if (!(grid.t_final >= grid.dt) || !std::isfinite(grid.t_final)) {
    throw ConfigError("grid: t_final must be at least dt");
  }
  if (grid.snapshot_stride < 0) throw ConfigError("grid: snapshot_stride must be >= 0");
}

double courant_number(const SystemSpec& sys, const GridConfig& grid) {
  const double lmax = std::max(0.0, sym_eig_bounds(sys.A).max);
  return 2.0 * std::sqrt(lmax) * grid.dt / grid.h();
}

// --- quadrature ------------------------------------------------------------

namespace {

double grid_step(Index cols) {
  if (cols < 2) throw ShapeError("field needs at least two grid points");
  return 1.0 / static_cast<double>(cols - 1);
}

}  // namespace

Vector trapezoid_integral(const Matrix& field) {
  const Index m = field.cols();
  const double h = grid_step(m);
  Vector out = field.rowwise().sum();
  out -= 0.5 * (field.col(0) + field.col(m - 1));
  return h * out;
}

double l2_norm(const Matrix& field) {
  const Matrix sq = field.colwise().squaredNorm();
  return std::sqrt(std::max(0.0, trapezoid_integral(sq)(0)));
}

double quadratic_integral(const Matrix& a, const Matrix& S, const Matrix& b) {
  const Matrix pointwise = (a.array() * (S * b).array()).colwise().sum();
  return trapezoid_integral(pointwise)(0);
}

Matrix spatial_gradient(const Matrix& field) {
  const Index m = field.cols();
  const double h = grid_step(m);
  if (m < 3) throw ShapeError("spatial_gradient needs at least three grid points");
  Matrix g(field.rows(), m);
  g.middleCols(1, m - 2) = (field.rightCols(m - 2) - field.leftCols(m - 2)) / (2.0 * h);
  g.col(0) = (-3.0 * field.col(0) + 4.0 * field.col(1) - field.col(2)) / (2.0 * h);
  g.col(m - 1) = (3.0 * field.col(m - 1) - 4.0 * field.col(m - 2) + field.col(m - 3)) / (2.0 * h);
  return g;
}

Matrix neumann_laplacian(const Matrix& field, const Vector& left_slope) {
  const Index m = field.cols();
  const double h = grid_step(m);
  const double inv_h2 = 1.0 / (h * h);
  Matrix out(field.rows(), m);
  out.middleCols(1, m - 2) =
      (field.leftCols(m - 2) - 2.0 * field.middleCols(1, m - 2) + field.rightCols(m - 2)) * inv_h2;
  // ghost f_{-1} = f_1 - 2 h slope;  ghost f_{N+1} = f_{N-1}
  out.col(0) = (2.0 * field.col(1) - 2.0 * field.col(0) - 2.0 * h * left_slope) * inv_h2;
  out.col(m - 1) = (2.0 * field.col(m - 2) - 2.0 * field.col(m - 1)) * inv_h2;
  return out;
}

// --- state -----------------------------------------------------------------

SimState::SimState(Index n, Index points, double t0)
    : t(t0), n_(n), points_(points), data_(Vector::Zero(4 * n * points)) {}

Signals compute_signals(const Matrix& w, const SystemSpec& sys, const ControlSpec& control,
                        const DisturbanceSpec& dist, double t) {
  Signals s;
  s.w_mean = trapezoid_integral(w);
  s.u = control.eval(s.w_mean);
  s.d = eval_disturbance(dist, t);
  s.y = sys.C * s.w_mean + sys.K * s.u + sys.H * s.d;
  return s;
}

Matrix estimate_field(const Matrix& z, const ObserverSpec& obs, const Signals& s) {
  const Vector offset = obs.Q * s.u + obs.E * s.y;
  return (obs.T * z).colwise() + offset;
}

namespace {

FieldRates plant_rates(const SimState& state, const SystemSpec& sys, const Signals& s) {
  const Matrix w = state.w();
  const Matrix v = state.v();
  const Vector slope = sys.C1 * v.col(0);
  const Vector forcing = sys.G * s.u + sys.F * s.d;
  FieldRates r;
  r.position = v;
  r.velocity = sys.A * neumann_laplacian(w, slope) - sys.B * v - sys.D * w +
               eval_nonlinearity_field(sys.nonlinearity, w);
  r.velocity.colwise() += forcing;
  return r;
}

FieldRates observer_rates(const SimState& state, const SystemSpec& sys, const ObserverSpec& obs,
                          const Signals& s) {
  const Matrix z = state.z();
  const Matrix zeta = state.zeta();
  const Vector slope = obs.M * (sys.C1 * state.v().col(0));
  const Matrix what = estimate_field(z, obs, s);
  const Vector forcing = obs.G1 * s.u + obs.L * s.y;
  FieldRates r;
  r.position = zeta;
  r.velocity = obs.A1 * neumann_laplacian(z, slope) - obs.B1 * zeta - obs.D1 * z +
               obs.M * eval_nonlinearity_field(sys.nonlinearity, what);
  r.velocity.colwise() += forcing;
  return r;
}

}  // namespace

FieldRates plant_rhs(const SimState& state, const SystemSpec& sys, const ControlSpec& control,
                     const DisturbanceSpec& dist, double t) {
  return plant_rates(state, sys, compute_signals(state.w(), sys, control, dist, t));
}

FieldRates observer_rhs(const SimState& state, const SystemSpec& sys, const ObserverSpec& obs,
                        const ControlSpec& control, const DisturbanceSpec& dist, double t) {
  return observer_rates(state, sys, obs, compute_signals(state.w(), sys, control, dist, t));
}

Vector rk4_step(const Vector& y, double t, double dt, const OdeRhs& rhs, long step_index) {
  if (!(dt > 0.0)) throw ConfigError("rk4_step: dt must be positive");
  const Vector k1 = rhs(t, y);
  const Vector k2 = rhs(t + 0.5 * dt, y + (0.5 * dt) * k1);
  const Vector k3 = rhs(t + 0.5 * dt, y + (0.5 * dt) * k2);
  const Vector k4 = rhs(t + dt, y + dt * k3);
  Vector next = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (!next.allFinite()) {
    std::ostringstream os;
    os << "integration diverged: non-finite state at step " << step_index;
    throw DivergenceError(os.str(), step_index);
  }
  return next;
}

OdeRhs coupled_rhs(const SystemSpec& sys, const ObserverSpec& obs, const ControlSpec& control,
                   const DisturbanceSpec& dist, Index points) {
  return [&sys, &obs, &control, &dist, points](double t, const Vector& y) {
    SimState state(sys.n, points, t);
    state.data() = y;
    const Signals s = compute_signals(state.w(), sys, control, dist, t);
    const FieldRates plant = plant_rates(state, sys, s);
    const FieldRates observer = observer_rates(state, sys, obs, s);

    SimState out(sys.n, points, t);
    out.w() = plant.position;
    out.v() = plant.velocity;
    out.z() = observer.position;
    out.zeta() = observer.velocity;
    return Vector(std::move(out.data()));
  };
}

// --- Lyapunov functional ---------------------------------------------------

Matrix transformation_error(const SimState& state, const ObserverSpec& obs) {
  return state.z() - obs.M * state.w();
}

Matrix transformation_error_rate(const SimState& state, const ObserverSpec& obs) {
  return state.zeta() - obs.M * state.v();
}

double lyapunov_xi(const Matrix& eps, const Matrix& eps_t, const ObserverSpec& obs,
                   const Certificate& cert) {
  const Matrix& P = cert.P;
  const Matrix eps_x = spatial_gradient(eps);
  return 0.5 * quadratic_integral(eps_x, P * obs.A1, eps_x) +
         0.5 * quadratic_integral(eps_t, P, eps_t) +
         cert.delta * quadratic_integral(eps, P, eps_t) +
         0.5 * quadratic_integral(eps, P * obs.D1, eps);
}

double lyapunov_xi(const SimState& state, const ObserverSpec& obs, const Certificate& cert) {
  return lyapunov_xi(transformation_error(state, obs), transformation_error_rate(state, obs), obs,
                     cert);
}

SandwichConstants sandwich_constants(const ObserverSpec& obs, const Certificate& cert) {
  const double bound = delta_bound(cert.P, obs.D1);
  if (!(cert.delta < bound)) {
    std::ostringstream os;
    os << "sandwich constants: delta " << cert.delta << " violates the bound " << bound;
    throw NumericError(os.str());
  }
  const EigBounds pa = sym_eig_bounds(symmetrize(cert.P * obs.A1));
  const EigBounds p = sym_eig_bounds(cert.P);
  const EigBounds pd = sym_eig_bounds(symmetrize(cert.P * obs.D1));
  const double dp = cert.delta * p.max;
  SandwichConstants c;
  c.lower = std::min({pa.min / 2.0, (p.min - dp) / 2.0, (pd.min - dp) / 2.0});
  c.upper = std::max({pa.max / 2.0, (p.max + dp) / 2.0, (pd.max + dp) / 2.0});
  return c;
}

// --- simulation ------------------------------------------------------------

SimState initial_state(const SimulationSetup& setup) {
  const SystemSpec& sys = setup.system;
  const GridConfig& grid = setup.grid;
  validate_grid(grid);
  require_consistent_shapes(sys, setup.observer);
  const Index points = grid.points();
  require_valid_initial_data(setup.initial, sys.n, points);

  SimState state(sys.n, points, 0.0);
  state.w() = setup.initial.w0;
  state.v() = setup.initial.w1;
  if (setup.initial.observer_form == ObserverInitForm::Internal) {
    state.z() = setup.initial.observer0;
    state.zeta() = setup.initial.observer1;
  } else {
    const Signals s0 = compute_signals(setup.initial.w0, sys, setup.control, setup.disturbance, 0.0);
    const ObserverInitialState z = derive_observer_initial(
        setup.initial.observer0, setup.initial.observer1, setup.observer, s0.u, s0.y);
    state.z() = z.z0;
    state.zeta() = z.z1;
  }
  return state;
}

namespace {

void check_norm(double value, const char* name, long step) {
  if (!std::isfinite(value) || value > kDivergenceNorm) {
    std::ostringstream os;
    os << "integration diverged: " << name << " = " << value << " at step " << step;
    throw DivergenceError(os.str(), step);
  }
}

}  // namespace

SimResult simulate(const SimulationSetup& setup, const StepCallback& on_step) {
  const SystemSpec& sys = setup.system;
  const ObserverSpec& obs = setup.observer;
  const GridConfig& grid = setup.grid;

  validate_grid(grid);
  if (setup.control.dim != sys.p) throw ShapeError("control dimension does not match p");
  if (setup.control.kind == ControlKind::IntegralStateFeedback &&
      (setup.control.K1.rows() != sys.p || setup.control.K1.cols() != sys.n)) {
    throw ShapeError("control gain K1 must be p x n");
  }
  if (setup.disturbance.dim != sys.d_dim) {
    throw ShapeError("disturbance dimension does not match d_dim");
  }

  SimResult result;
  result.courant = courant_number(sys, grid);
  if (result.courant > kCourantLimit) {
    std::ostringstream os;
    os << "Courant number " << result.courant << " exceeds " << kCourantLimit;
    if (result.courant > kCourantHardLimit) {
      if (!grid.override_cfl) {
        os << " and the hard limit " << kCourantHardLimit << " (set override_cfl to run anyway)";
        throw ConfigError(os.str());
      }
      os << "; running because override_cfl is set";
    }
    result.warnings.push_back(os.str());
  }

  SimState state = initial_state(setup);
  const Index points = grid.points();
  const double h = grid.h();
  result.x.resize(static_cast<std::size_t>(points));
  for (Index i = 0; i < points; ++i) result.x[static_cast<std::size_t>(i)] = static_cast<double>(i) * h;

  const long steps = grid.steps();
  const auto reserve = static_cast<std::size_t>(steps + 1);
  result.times.reserve(reserve);
  result.e_norm.reserve(reserve);
  result.eps_norm.reserve(reserve);
  result.d_norm.reserve(reserve);
  result.int_e_sq.reserve(reserve);
  result.int_d_sq.reserve(reserve);
  if (setup.certificate) result.xi.reserve(reserve);

  const OdeRhs rhs = coupled_rhs(sys, obs, setup.control, setup.disturbance, points);

  auto record = [&](long k) {
    const Signals s = compute_signals(state.w(), sys, setup.control, setup.disturbance, state.t);
    const Matrix what = estimate_field(state.z(), obs, s);
    const Matrix e = what - state.w();
    const Matrix eps = transformation_error(state, obs);
    const double e_norm = l2_norm(e);
    const double eps_norm = l2_norm(eps);
    const double d_norm = s.d.norm();
    check_norm(e_norm, "||e||", k);
    check_norm(eps_norm, "||eps||", k);

    if (result.times.empty()) {
      result.int_e_sq.push_back(0.0);
      result.int_d_sq.push_back(0.0);
    } else {
      const double dt = state.t - result.times.back();
      const double e_prev = result.e_norm.back();
      const double d_prev = result.d_norm.back();
      result.int_e_sq.push_back(result.int_e_sq.back() +
                                0.5 * dt * (e_prev * e_prev + e_norm * e_norm));
      result.int_d_sq.push_back(result.int_d_sq.back() +
                                0.5 * dt * (d_prev * d_prev + d_norm * d_norm));
    }
    result.times.push_back(state.t);
    result.e_norm.push_back(e_norm);
    result.eps_norm.push_back(eps_norm);
    result.d_norm.push_back(d_norm);
    if (setup.certificate) {
      result.xi.push_back(
          lyapunov_xi(eps, transformation_error_rate(state, obs), obs, *setup.certificate));
    }
    if (grid.snapshot_stride > 0 && k % grid.snapshot_stride == 0) {
      result.snapshots.push_back({state.t, state.w(), what, e, state.z()});
    }
    if (on_step) on_step(k, state, s);
  };

  record(0);
  for (long k = 1; k <= steps; ++k) {
    state.data() = rk4_step(state.data(), state.t, grid.dt, rhs, k);
    state.t = static_cast<double>(k) * grid.dt;
    record(k);
  }

  if (result.int_d_sq.back() > 0.0) result.hinf_ratio = hinf_ratio(result);
  return result;
}

double hinf_ratio(const SimResult& result) {
  const auto& t = result.times;
  if (t.size() != result.e_norm.size() || t.size() != result.d_norm.size()) {
    throw ShapeError("hinf_ratio: series lengths differ");
  }
  double num = 0.0, den = 0.0;
  for (std::size_t k = 1; k < t.size(); ++k) {
    const double dt = t[k] - t[k - 1];
    num += 0.5 * dt * (result.e_norm[k - 1] * result.e_norm[k - 1] + result.e_norm[k] * result.e_norm[k]);
    den += 0.5 * dt * (result.d_norm[k - 1] * result.d_norm[k - 1] + result.d_norm[k] * result.d_norm[k]);
  }
  if (!(den > 0.0)) throw NumericError("hinf ratio undefined for d == 0 (zero disturbance energy)");
  return num / den;
}

}  // namespace waveuio
