#include "waveuio/io.hpp"

#include <fstream>
#include <sstream>

#include "waveuio/errors.hpp"

namespace waveuio {

namespace {

const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ConfigError(std::string("missing key '") + key + "'");
  }
  return j.at(key);
}

double number(const Json& j, const char* key) {
  const Json& v = require(j, key);
  if (!v.is_number()) throw ConfigError(std::string("key '") + key + "' must be a number");
  return v.get<double>();
}

Index count(const Json& j, const char* key) {
  const Json& v = require(j, key);
  if (!v.is_number_integer()) throw ConfigError(std::string("key '") + key + "' must be an integer");
  return v.get<Index>();
}

std::string text(const Json& j, const char* key) {
  const Json& v = require(j, key);
  if (!v.is_string()) throw ConfigError(std::string("key '") + key + "' must be a string");
  return v.get<std::string>();
}

Json condition_json(const Condition& c) {
  return {{"max_eig", c.max_eig}, {"holds", c.holds}};
}

}  // namespace

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("invalid JSON in '" + path.string() + "': " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& doc) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << doc.dump(2) << '\n';
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j, const char* name) {
  if (!j.is_array()) throw ConfigError(std::string("matrix '") + name + "' must be an array");
  if (j.empty()) return Matrix(0, 0);
  if (j.front().is_number()) {
    Matrix m(static_cast<Index>(j.size()), 1);
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (!j[i].is_number()) throw ConfigError(std::string("matrix '") + name + "' has a non-number");
      m(static_cast<Index>(i), 0) = j[i].get<double>();
    }
    return m;
  }
  const auto rows = static_cast<Index>(j.size());
  const auto cols = static_cast<Index>(j.front().is_array() ? j.front().size() : 0);
  Matrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
      throw ConfigError(std::string("matrix '") + name + "' is ragged");
    }
    for (Index c = 0; c < cols; ++c) {
      const Json& v = row[static_cast<std::size_t>(c)];
      if (!v.is_number()) throw ConfigError(std::string("matrix '") + name + "' has a non-number");
      m(r, c) = v.get<double>();
    }
  }
  return m;
}

// --- system ----------------------------------------------------------------

SystemSpec system_from_json(const Json& j) {
  SystemSpec s;
  s.n = count(j, "n");
  s.p = count(j, "p");
  s.q = count(j, "q");
  s.d_dim = count(j, "d_dim");
  s.A = matrix_from_json(require(j, "A"), "A");
  s.B = matrix_from_json(require(j, "B"), "B");
  s.C = matrix_from_json(require(j, "C"), "C");
  s.C1 = matrix_from_json(require(j, "C1"), "C1");
  s.D = matrix_from_json(require(j, "D"), "D");
  s.F = matrix_from_json(require(j, "F"), "F");
  s.G = matrix_from_json(require(j, "G"), "G");
  s.H = matrix_from_json(require(j, "H"), "H");
  s.K = matrix_from_json(require(j, "K"), "K");
  const Json& nl = require(j, "nonlinearity");
  s.nonlinearity.kind = nonlinearity_kind_from_string(text(nl, "kind"));
  if (s.nonlinearity.kind != NonlinearityKind::Zero) {
    const Matrix a = matrix_from_json(require(nl, "amplitudes"), "amplitudes");
    s.nonlinearity.amplitudes = Eigen::Map<const Vector>(a.data(), a.size());
  }
  s.gamma = number(j, "gamma");
  return s;
}

Json to_json(const SystemSpec& s) {
  Json nl = {{"kind", to_string(s.nonlinearity.kind)}};
  if (s.nonlinearity.kind != NonlinearityKind::Zero) {
    nl["amplitudes"] = std::vector<double>(s.nonlinearity.amplitudes.data(),
                                           s.nonlinearity.amplitudes.data() +
                                               s.nonlinearity.amplitudes.size());
  }
  return {{"n", s.n},
          {"p", s.p},
          {"q", s.q},
          {"d_dim", s.d_dim},
          {"A", matrix_to_json(s.A)},
          {"B", matrix_to_json(s.B)},
          {"C", matrix_to_json(s.C)},
          {"C1", matrix_to_json(s.C1)},
          {"D", matrix_to_json(s.D)},
          {"F", matrix_to_json(s.F)},
          {"G", matrix_to_json(s.G)},
          {"H", matrix_to_json(s.H)},
          {"K", matrix_to_json(s.K)},
          {"nonlinearity", nl},
          {"gamma", s.gamma}};
}

// --- observer --------------------------------------------------------------

ObserverSpec observer_from_json(const Json& j) {
  ObserverSpec o;
  o.A1 = matrix_from_json(require(j, "A1"), "A1");
  o.B1 = matrix_from_json(require(j, "B1"), "B1");
  o.D1 = matrix_from_json(require(j, "D1"), "D1");
  o.M = matrix_from_json(require(j, "M"), "M");
  o.T = matrix_from_json(require(j, "T"), "T");
  o.G1 = matrix_from_json(require(j, "G1"), "G1");
  o.L = matrix_from_json(require(j, "L"), "L");
  o.E = matrix_from_json(require(j, "E"), "E");
  o.Q = matrix_from_json(require(j, "Q"), "Q");
  return o;
}

Json to_json(const ObserverSpec& o) {
  return {{"A1", matrix_to_json(o.A1)}, {"B1", matrix_to_json(o.B1)},
          {"D1", matrix_to_json(o.D1)}, {"M", matrix_to_json(o.M)},
          {"T", matrix_to_json(o.T)},   {"G1", matrix_to_json(o.G1)},
          {"L", matrix_to_json(o.L)},   {"E", matrix_to_json(o.E)},
          {"Q", matrix_to_json(o.Q)}};
}

Json to_json(const ResidualReport& r) {
  Json j = Json::object();
  for (const auto& [name, value] : r.entries()) j[std::string(name)] = value;
  j["max_residual"] = r.max_residual;
  return j;
}

Json to_json(const SynthesisSolution& s) {
  Json j = to_json(s.observer);
  j["alpha"] = s.alpha;
  j["nullspace_dim"] = s.nullspace_dim;
  j["residuals"] = to_json(s.residuals);
  return j;
}

// --- certificate -----------------------------------------------------------

Certificate certificate_from_json(const Json& j, Index n) {
  Certificate c;
  if (j.contains("P")) {
    c.P = matrix_from_json(j.at("P"), "P");
    c.Gamma = matrix_from_json(require(j, "Gamma"), "Gamma");
  } else {
    c.P = number(j, "p") * Matrix::Identity(n, n);
    c.Gamma = number(j, "g") * Matrix::Identity(n, n);
  }
  c.delta = number(j, "delta");
  if (j.contains("mu") && !j.at("mu").is_null()) c.mu = number(j, "mu");
  if (c.P.rows() != n || c.P.cols() != n || c.Gamma.rows() != n || c.Gamma.cols() != n) {
    throw ShapeError("certificate: P and Gamma must be n x n");
  }
  return c;
}

Json to_json(const Certificate& c) {
  Json j = {{"P", matrix_to_json(c.P)}, {"Gamma", matrix_to_json(c.Gamma)}, {"delta", c.delta}};
  j["mu"] = c.mu ? Json(*c.mu) : Json(nullptr);
  return j;
}

Json to_json(const CertificateReport& r) {
  Json j = Json::object();
  if (r.pi) j["pi"] = condition_json(*r.pi);
  if (r.second_ineq) j["second_ineq"] = condition_json(*r.second_ineq);
  if (r.theta) j["theta"] = condition_json(*r.theta);
  if (r.a44_max_eig) j["a44_max_eig"] = *r.a44_max_eig;
  j["gamma_condition"] = condition_json(r.gamma_condition);
  j["delta"] = r.delta;
  j["delta_bound"] = r.delta_bound;
  j["delta_ok"] = r.delta_ok;
  j["failed_conditions"] = r.failed_conditions();
  j["pass"] = r.pass;
  return j;
}

// --- scenario pieces -------------------------------------------------------

Json to_json(const GridConfig& g) {
  return {{"nx", g.nx},
          {"dt", g.dt},
          {"tfinal", g.t_final},
          {"snapshot_stride", g.snapshot_stride},
          {"override_cfl", g.override_cfl}};
}

GridConfig grid_from_json(const Json& j, GridConfig g) {
  if (j.contains("nx")) g.nx = count(j, "nx");
  if (j.contains("dt")) g.dt = number(j, "dt");
  if (j.contains("tfinal")) g.t_final = number(j, "tfinal");
  if (j.contains("snapshot_stride")) g.snapshot_stride = count(j, "snapshot_stride");
  if (j.contains("override_cfl")) g.override_cfl = require(j, "override_cfl").get<bool>();
  return g;
}

DisturbanceSpec disturbance_from_json(const Json& j, Index d_dim) {
  const DisturbanceKind kind = disturbance_kind_from_string(text(j, "kind"));
  switch (kind) {
    case DisturbanceKind::Zero:
      return DisturbanceSpec::zero(d_dim);
    case DisturbanceKind::Constant: {
      const Matrix v = matrix_from_json(require(j, "value"), "value");
      return DisturbanceSpec::constant_value(Eigen::Map<const Vector>(v.data(), v.size()));
    }
    case DisturbanceKind::DampedSine:
      return DisturbanceSpec::damped_sine(d_dim, number(j, "amplitude"), number(j, "decay"),
                                          number(j, "omega"));
    case DisturbanceKind::Sampled: {
      const Json& times = require(j, "times");
      const Matrix values = matrix_from_json(require(j, "values"), "values");
      if (!times.is_array() || static_cast<Index>(times.size()) != values.rows()) {
        throw ConfigError("sampled disturbance: 'times' and 'values' differ in length");
      }
      std::vector<double> t;
      std::vector<Vector> v;
      for (std::size_t k = 0; k < times.size(); ++k) {
        t.push_back(times[k].get<double>());
        v.emplace_back(values.row(static_cast<Index>(k)).transpose());
      }
      DisturbanceSpec s = DisturbanceSpec::sampled(std::move(t), std::move(v));
      if (s.times.empty()) s.dim = d_dim;
      return s;
    }
  }
  return DisturbanceSpec::zero(d_dim);
}

Json to_json(const DisturbanceSpec& d) {
  Json j = {{"kind", to_string(d.kind)}, {"dim", d.dim}};
  switch (d.kind) {
    case DisturbanceKind::Zero: break;
    case DisturbanceKind::Constant: j["value"] = matrix_to_json(d.constant); break;
    case DisturbanceKind::DampedSine:
      j["amplitude"] = d.amplitude;
      j["decay"] = d.decay;
      j["omega"] = d.omega;
      break;
    case DisturbanceKind::Sampled: {
      j["times"] = d.times;
      Json values = Json::array();
      for (const auto& v : d.values) values.push_back(std::vector<double>(v.data(), v.data() + v.size()));
      j["values"] = values;
      break;
    }
  }
  return j;
}

ControlSpec control_from_json(const Json& j, Index p) {
  const ControlKind kind = control_kind_from_string(text(j, "kind"));
  if (kind == ControlKind::Zero) return ControlSpec::zero(p);
  return ControlSpec::integral_feedback(matrix_from_json(require(j, "K1"), "K1"));
}

Json to_json(const ControlSpec& c) {
  Json j = {{"kind", to_string(c.kind)}};
  if (c.kind == ControlKind::IntegralStateFeedback) j["K1"] = matrix_to_json(c.K1);
  return j;
}

Scenario scenario_from_json(const Json& j, const SystemSpec& sys) {
  if (!j.is_object()) throw ConfigError("scenario must be a JSON object");
  Scenario s;
  const bool builtin = j.contains("builtin");
  if (builtin) {
    s = builtin_scenario(text(j, "builtin"));
  } else {
    s.name = j.contains("name") ? text(j, "name") : std::string("custom");
    s.control = ControlSpec::zero(sys.p);
    s.disturbance = DisturbanceSpec::zero(sys.d_dim);
  }
  if (j.contains("grid")) {
    const GridConfig g = grid_from_json(j.at("grid"), s.grid);
    if (builtin && !j.contains("initial")) {
      resample_builtin(s, g);
    } else {
      s.grid = g;
    }
  }
  if (j.contains("initial")) {
    const Json& ic = j.at("initial");
    s.initial.w0 = matrix_from_json(require(ic, "w0"), "w0");
    s.initial.w1 = matrix_from_json(require(ic, "w1"), "w1");
    if (ic.contains("z0")) {
      s.initial.observer_form = ObserverInitForm::Internal;
      s.initial.observer0 = matrix_from_json(require(ic, "z0"), "z0");
      s.initial.observer1 = matrix_from_json(require(ic, "z1"), "z1");
    } else {
      s.initial.observer_form = ObserverInitForm::Estimate;
      s.initial.observer0 = matrix_from_json(require(ic, "what0"), "what0");
      s.initial.observer1 = matrix_from_json(require(ic, "what1"), "what1");
    }
  } else if (!builtin) {
    throw ConfigError("scenario needs 'initial' data or a 'builtin' name");
  }
  if (j.contains("control")) s.control = control_from_json(j.at("control"), sys.p);
  if (j.contains("disturbance")) s.disturbance = disturbance_from_json(j.at("disturbance"), sys.d_dim);
  if (j.contains("certificate")) {
    const Json& c = j.at("certificate");
    if (c.is_null()) {
      s.certificate.reset();
    } else {
      s.certificate = certificate_from_json(c, sys.n);
    }
  }
  return s;
}

}  // namespace waveuio
