#include "waveuio/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "waveuio/errors.hpp"

namespace waveuio {

namespace {

std::string shape_str(const Matrix& m) {
  std::ostringstream os;
  os << m.rows() << "x" << m.cols();
  return os.str();
}

void check_shape(std::vector<std::string>& out, const char* name, const Matrix& m,
                 Index rows, Index cols) {
  if (m.rows() != rows || m.cols() != cols) {
    std::ostringstream os;
    os << name << " has shape " << shape_str(m) << ", expected " << rows << "x" << cols;
    out.push_back(os.str());
  }
}

std::vector<std::string> shape_violations(const SystemSpec& sys) {
  std::vector<std::string> out;
  if (sys.n <= 0 || sys.p <= 0 || sys.d_dim <= 0 || sys.q <= 0) {
    std::ostringstream os;
    os << "dimensions must be positive (n=" << sys.n << ", p=" << sys.p
       << ", d_dim=" << sys.d_dim << ", q=" << sys.q << ")";
    out.push_back(os.str());
    return out;
  }
  check_shape(out, "A", sys.A, sys.n, sys.n);
  check_shape(out, "B", sys.B, sys.n, sys.n);
  check_shape(out, "D", sys.D, sys.n, sys.n);
  check_shape(out, "C1", sys.C1, sys.n, sys.n);
  check_shape(out, "C", sys.C, sys.q, sys.n);
  check_shape(out, "G", sys.G, sys.n, sys.p);
  check_shape(out, "F", sys.F, sys.n, sys.d_dim);
  check_shape(out, "K", sys.K, sys.q, sys.p);
  check_shape(out, "H", sys.H, sys.q, sys.d_dim);
  if (sys.nonlinearity.kind != NonlinearityKind::Zero &&
      sys.nonlinearity.amplitudes.size() != sys.n) {
    std::ostringstream os;
    os << "nonlinearity amplitudes have length " << sys.nonlinearity.amplitudes.size()
       << ", expected " << sys.n;
    out.push_back(os.str());
  }
  return out;
}

}  // namespace

// --- nonlinearity ----------------------------------------------------------

std::string_view to_string(NonlinearityKind kind) {
  switch (kind) {
    case NonlinearityKind::Zero: return "zero";
    case NonlinearityKind::ComponentSine: return "sine";
    case NonlinearityKind::ComponentTanh: return "tanh";
  }
  return "zero";
}

NonlinearityKind nonlinearity_kind_from_string(std::string_view name) {
  if (name == "zero") return NonlinearityKind::Zero;
  if (name == "sine") return NonlinearityKind::ComponentSine;
  if (name == "tanh") return NonlinearityKind::ComponentTanh;
  throw ConfigError("unknown nonlinearity kind '" + std::string(name) + "'");
}

NonlinearitySpec NonlinearitySpec::sine(Vector amplitudes) {
  return {NonlinearityKind::ComponentSine, std::move(amplitudes)};
}

NonlinearitySpec NonlinearitySpec::tanh(Vector amplitudes) {
  return {NonlinearityKind::ComponentTanh, std::move(amplitudes)};
}

double NonlinearitySpec::lipschitz_constant() const {
  if (kind == NonlinearityKind::Zero || amplitudes.size() == 0) return 0.0;
  return amplitudes.cwiseAbs().maxCoeff();
}

Vector eval_nonlinearity(const NonlinearitySpec& spec, const Vector& w) {
  switch (spec.kind) {
    case NonlinearityKind::Zero:
      return Vector::Zero(w.size());
    case NonlinearityKind::ComponentSine:
      return spec.amplitudes.cwiseProduct(w.array().sin().matrix());
    case NonlinearityKind::ComponentTanh:
      return spec.amplitudes.cwiseProduct(w.array().tanh().matrix());
  }
  return Vector::Zero(w.size());
}

Matrix eval_nonlinearity_field(const NonlinearitySpec& spec, const Matrix& field) {
  switch (spec.kind) {
    case NonlinearityKind::Zero:
      return Matrix::Zero(field.rows(), field.cols());
    case NonlinearityKind::ComponentSine:
      return spec.amplitudes.asDiagonal() * field.array().sin().matrix();
    case NonlinearityKind::ComponentTanh:
      return spec.amplitudes.asDiagonal() * field.array().tanh().matrix();
  }
  return Matrix::Zero(field.rows(), field.cols());
}

// --- system ----------------------------------------------------------------

void require_consistent_shapes(const SystemSpec& sys) {
  const auto v = shape_violations(sys);
  if (!v.empty()) throw ShapeError("system: " + v.front());
}

ValidationReport validate_system(const SystemSpec& sys) {
  ValidationReport report;
  report.violations = shape_violations(sys);
  if (!report.violations.empty()) return report;

  const std::pair<const char*, const Matrix*> square[] = {
      {"A", &sys.A}, {"B", &sys.B}, {"D", &sys.D}, {"C1", &sys.C1}};
  for (const auto& [name, m] : square) {
    if (!m->allFinite()) {
      report.violations.push_back(std::string(name) + " has non-finite entries");
      continue;
    }
    if (!is_symmetric(*m)) {
      report.violations.push_back(std::string(name) + " not symmetric");
      continue;
    }
    if (!is_positive_definite(*m)) {
      std::string msg = std::string(name) + " not positive definite";
      if (m == &sys.C1) {
        report.warnings.push_back(msg);
      } else {
        report.violations.push_back(msg);
      }
    }
  }
  const std::pair<const char*, const Matrix*> rect[] = {
      {"C", &sys.C}, {"G", &sys.G}, {"F", &sys.F}, {"K", &sys.K}, {"H", &sys.H}};
  for (const auto& [name, m] : rect) {
    if (!m->allFinite()) report.violations.push_back(std::string(name) + " has non-finite entries");
  }
  if (sys.nonlinearity.kind != NonlinearityKind::Zero && !sys.nonlinearity.amplitudes.allFinite()) {
    report.violations.push_back("nonlinearity amplitudes have non-finite entries");
  }

  const double lip = sys.nonlinearity.lipschitz_constant();
  if (!(sys.gamma >= 0.0) || !std::isfinite(sys.gamma)) {
    report.violations.push_back("gamma must be a finite nonnegative number");
  } else if (std::abs(sys.gamma - lip) > 1e-12 * std::max(1.0, lip)) {
    std::ostringstream os;
    os << "gamma " << sys.gamma << " != catalog Lipschitz constant " << lip;
    report.violations.push_back(os.str());
  }
  return report;
}

// --- observer / certificate -------------------------------------------------

void require_consistent_shapes(const SystemSpec& sys, const ObserverSpec& obs) {
  require_consistent_shapes(sys);
  std::vector<std::string> v;
  check_shape(v, "A1", obs.A1, sys.n, sys.n);
  check_shape(v, "B1", obs.B1, sys.n, sys.n);
  check_shape(v, "D1", obs.D1, sys.n, sys.n);
  check_shape(v, "M", obs.M, sys.n, sys.n);
  check_shape(v, "T", obs.T, sys.n, sys.n);
  check_shape(v, "G1", obs.G1, sys.n, sys.p);
  check_shape(v, "L", obs.L, sys.n, sys.q);
  check_shape(v, "E", obs.E, sys.n, sys.q);
  check_shape(v, "Q", obs.Q, sys.n, sys.p);
  if (!v.empty()) throw ShapeError("observer: " + v.front());
}

Certificate Certificate::scalar(Index n, double p, double g, double delta,
                                std::optional<double> mu) {
  Certificate c;
  c.P = p * Matrix::Identity(n, n);
  c.Gamma = g * Matrix::Identity(n, n);
  c.delta = delta;
  c.mu = mu;
  return c;
}

// --- disturbance -----------------------------------------------------------

std::string_view to_string(DisturbanceKind kind) {
  switch (kind) {
    case DisturbanceKind::Zero: return "zero";
    case DisturbanceKind::Constant: return "constant";
    case DisturbanceKind::DampedSine: return "damped_sine";
    case DisturbanceKind::Sampled: return "sampled";
  }
  return "zero";
}

DisturbanceKind disturbance_kind_from_string(std::string_view name) {
  if (name == "zero") return DisturbanceKind::Zero;
  if (name == "constant") return DisturbanceKind::Constant;
  if (name == "damped_sine") return DisturbanceKind::DampedSine;
  if (name == "sampled") return DisturbanceKind::Sampled;
  throw ConfigError("unknown disturbance kind '" + std::string(name) + "'");
}

DisturbanceSpec DisturbanceSpec::zero(Index dim) {
  DisturbanceSpec s;
  s.dim = dim;
  return s;
}

DisturbanceSpec DisturbanceSpec::constant_value(Vector value) {
  DisturbanceSpec s;
  s.kind = DisturbanceKind::Constant;
  s.dim = value.size();
  s.constant = std::move(value);
  return s;
}

DisturbanceSpec DisturbanceSpec::damped_sine(Index dim, double a, double b, double c) {
  DisturbanceSpec s;
  s.kind = DisturbanceKind::DampedSine;
  s.dim = dim;
  s.amplitude = a;
  s.decay = b;
  s.omega = c;
  return s;
}

DisturbanceSpec DisturbanceSpec::sampled(std::vector<double> times, std::vector<Vector> values) {
  if (times.size() != values.size()) {
    throw ConfigError("sampled disturbance: times and values differ in length");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      throw ConfigError("sampled disturbance: times must be strictly increasing");
    }
  }
  DisturbanceSpec s;
  s.kind = DisturbanceKind::Sampled;
  s.dim = values.empty() ? 0 : values.front().size();
  for (const auto& v : values) {
    if (v.size() != s.dim) throw ConfigError("sampled disturbance: ragged value table");
  }
  s.times = std::move(times);
  s.values = std::move(values);
  return s;
}

bool DisturbanceSpec::identically_zero() const {
  switch (kind) {
    case DisturbanceKind::Zero: return true;
    case DisturbanceKind::Constant: return constant.size() == 0 || constant.isZero(0.0);
    case DisturbanceKind::DampedSine: return amplitude == 0.0 || omega == 0.0;
    case DisturbanceKind::Sampled:
      return std::all_of(values.begin(), values.end(),
                         [](const Vector& v) { return v.isZero(0.0); });
  }
  return false;
}

Vector eval_disturbance(const DisturbanceSpec& spec, double t) {
  if (!(t >= 0.0)) throw ConfigError("disturbance evaluated at negative or NaN time");
  switch (spec.kind) {
    case DisturbanceKind::Zero:
      return Vector::Zero(spec.dim);
    case DisturbanceKind::Constant:
      return spec.constant;
    case DisturbanceKind::DampedSine:
      return Vector::Constant(spec.dim,
                              spec.amplitude * std::exp(-spec.decay * t) * std::sin(spec.omega * t));
    case DisturbanceKind::Sampled: {
      if (spec.times.empty()) throw ConfigError("sampled disturbance has an empty table");
      if (t <= spec.times.front()) return spec.values.front();
      if (t >= spec.times.back()) return spec.values.back();
      const auto it = std::upper_bound(spec.times.begin(), spec.times.end(), t);
      const auto hi = static_cast<std::size_t>(it - spec.times.begin());
      const std::size_t lo = hi - 1;
      const double s = (t - spec.times[lo]) / (spec.times[hi] - spec.times[lo]);
      return (1.0 - s) * spec.values[lo] + s * spec.values[hi];
    }
  }
  return Vector::Zero(spec.dim);
}

// --- control ---------------------------------------------------------------

std::string_view to_string(ControlKind kind) {
  switch (kind) {
    case ControlKind::Zero: return "zero";
    case ControlKind::IntegralStateFeedback: return "integral_state_feedback";
  }
  return "zero";
}

ControlKind control_kind_from_string(std::string_view name) {
  if (name == "zero") return ControlKind::Zero;
  if (name == "integral_state_feedback") return ControlKind::IntegralStateFeedback;
  throw ConfigError("unknown control kind '" + std::string(name) + "'");
}

ControlSpec ControlSpec::zero(Index p) {
  ControlSpec c;
  c.dim = p;
  return c;
}

ControlSpec ControlSpec::integral_feedback(Matrix K1) {
  ControlSpec c;
  c.kind = ControlKind::IntegralStateFeedback;
  c.dim = K1.rows();
  c.K1 = std::move(K1);
  return c;
}

Vector ControlSpec::eval(const Vector& w_integral) const {
  if (kind == ControlKind::Zero) return Vector::Zero(dim);
  return -K1 * w_integral;
}

// --- initial data ----------------------------------------------------------

void require_valid_initial_data(const InitialData& ic, Index n, Index cols) {
  const std::pair<const char*, const Matrix*> fields[] = {
      {"w0", &ic.w0}, {"w1", &ic.w1}, {"observer0", &ic.observer0}, {"observer1", &ic.observer1}};
  for (const auto& [name, m] : fields) {
    if (m->rows() != n || m->cols() != cols) {
      std::ostringstream os;
      os << "initial field " << name << " has shape " << shape_str(*m) << ", expected " << n
         << "x" << cols;
      throw ConfigError(os.str());
    }
    if (!m->allFinite()) throw ConfigError(std::string("initial field ") + name + " is not finite");
  }
}

}  // namespace waveuio
