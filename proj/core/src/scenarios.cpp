#include "waveuio/scenarios.hpp"

#include <cmath>
#include <functional>
#include <numbers>

#include "waveuio/errors.hpp"

namespace waveuio {

namespace {

using std::numbers::pi;

Matrix diag2(double a) { return a * Matrix::Identity(2, 2); }

Matrix col2(double a, double b) {
  Matrix m(2, 1);
  m << a, b;
  return m;
}

using Profile = std::function<double(double)>;

Matrix sample(const GridConfig& grid, const Profile& first, const Profile& second) {
  const Index m = grid.points();
  Matrix out(2, m);
  for (Index i = 0; i < m; ++i) {
    const double x = static_cast<double>(i) * grid.h();
    out(0, i) = first(x);
    out(1, i) = second(x);
  }
  return out;
}

InitialData initial_d0(const GridConfig& g) {
  InitialData ic;
  ic.w0 = sample(g, [](double x) { return -0.5 * std::cos(2 * pi * x) + 0.5; },
                 [](double x) { return 0.5 * x * std::cos(pi * x); });
  ic.w1 = sample(g, [](double x) { return x * x - x; }, [](double x) { return x; });
  ic.observer_form = ObserverInitForm::Estimate;
  ic.observer0 = sample(g, [](double x) { return -2.5 * std::cos(2 * pi * x) + 2.5; },
                        [](double x) { return -1.5 * x * std::cos(pi * x); });
  ic.observer1 = sample(g, [](double x) { return -x * x - x; }, [](double x) { return -x; });
  return ic;
}

InitialData initial_dsin(const GridConfig& g, bool zero_error) {
  InitialData ic;
  ic.w0 = sample(g, [](double x) { return x - x * x; }, [](double x) { return -x * x * x; });
  ic.w1 = sample(g, [](double x) { return -x * x + 2 * x - 1; }, [](double x) { return -x * x; });
  ic.observer_form = ObserverInitForm::Estimate;
  if (zero_error) {
    ic.observer0 = ic.w0;
    ic.observer1 = ic.w1;
  } else {
    ic.observer0 = sample(g, [](double x) { return 4 * x + 2 * x * x * x - x * x; },
                          [](double x) { return 0.25 * x * x * x - x * x; });
    ic.observer1 = sample(g, [](double) { return 0.0; },
                          [](double x) { return -x * x * x + x * x; });
  }
  return ic;
}

GridConfig default_grid(std::string_view name) {
  GridConfig g;
  g.nx = 100;
  g.dt = 0.01;
  g.t_final = name == "paper-d0" ? 10.0 : 20.0;
  g.snapshot_stride = 10;
  return g;
}

}  // namespace

SystemSpec reference_system() {
  SystemSpec s;
  s.n = 2;
  s.p = 1;
  s.d_dim = 1;
  s.q = 2;
  s.A = diag2(2.0);
  s.B = diag2(4.0);
  s.D = diag2(4.5);
  s.C1.resize(2, 2);
  s.C1 << 0.0, 0.25, 0.25, 0.0;
  s.C.resize(2, 2);
  s.C << 0.75, -0.75, -0.75, 0.75;
  s.G = col2(2.0, 2.0);
  s.K = col2(-2.0, -2.0);
  s.H = col2(0.05, 0.05);
  s.F = col2(0.1, -0.1);
  s.nonlinearity = NonlinearitySpec::sine(Vector::Constant(2, 0.1));
  s.gamma = 0.1;
  return s;
}

ObserverSpec reference_observer() {
  ObserverSpec o;
  o.A1 = diag2(2.0);
  o.B1 = diag2(4.0);
  o.D1 = diag2(4.5);
  o.M = diag2(0.95);
  o.T = diag2(100.0 / 95.0);
  o.G1 = col2(5.7, -1.9);
  o.L.resize(2, 2);
  o.L << 0.95, 0.95, -0.95, -0.95;
  o.E = o.L;
  o.Q = col2(3.8, -3.8);
  return o;
}

Certificate reference_certificate() { return Certificate::scalar(2, 2.5, 8.0 / 9.0, 0.25, 0.95); }

ControlSpec reference_control() {
  Matrix K1(1, 2);
  K1 << 0.5, 0.5;
  return ControlSpec::integral_feedback(std::move(K1));
}

DisturbanceSpec reference_disturbance() {
  return DisturbanceSpec::damped_sine(1, 0.2, 0.4, 0.5 * pi);
}

std::vector<std::string> builtin_scenario_names() {
  return {"paper-d0", "paper-dsin", "paper-dsin-zero-e0"};
}

bool is_builtin_scenario(std::string_view name) {
  for (const auto& n : builtin_scenario_names()) {
    if (n == name) return true;
  }
  return false;
}

void resample_builtin(Scenario& scenario, const GridConfig& grid) {
  validate_grid(grid);
  if (scenario.name == "paper-d0") {
    scenario.initial = initial_d0(grid);
  } else if (scenario.name == "paper-dsin") {
    scenario.initial = initial_dsin(grid, false);
  } else if (scenario.name == "paper-dsin-zero-e0") {
    scenario.initial = initial_dsin(grid, true);
  } else {
    throw ConfigError("unknown built-in scenario '" + scenario.name + "'");
  }
  scenario.grid = grid;
}

Scenario builtin_scenario(std::string_view name, std::optional<GridConfig> grid) {
  if (!is_builtin_scenario(name)) {
    throw ConfigError("unknown built-in scenario '" + std::string(name) + "'");
  }
  Scenario s;
  s.name = std::string(name);
  s.control = reference_control();
  s.disturbance = name == "paper-d0" ? DisturbanceSpec::zero(1) : reference_disturbance();
  s.certificate = reference_certificate();
  resample_builtin(s, grid.value_or(default_grid(name)));
  return s;
}

}  // namespace waveuio
