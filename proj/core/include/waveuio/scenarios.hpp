#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "waveuio/model.hpp"
#include "waveuio/wavesim.hpp"

namespace waveuio {

/// Everything a simulation needs besides the plant and the observer.
struct Scenario {
  std::string name;
  GridConfig grid;
  InitialData initial;
  ControlSpec control;
  DisturbanceSpec disturbance;
  std::optional<Certificate> certificate;
};

/// Two coupled wave equations: A = 2I, B = 4I, D = 4.5I,
/// C1 = [[0, .25], [.25, 0]], C = .75 [[1, -1], [-1, 1]], G = (2, 2),
/// K = (-2, -2), H = (.05, .05), F = (.1, -.1), f_i = 0.1 sin(w_i).
SystemSpec reference_system();

/// The matching observer for reference_system() with M = 0.95 I.
ObserverSpec reference_observer();

/// P = 2.5 I, Gamma = 8/9 I, delta = 1/4, mu = 0.95.
Certificate reference_certificate();

/// u = -[1/2 1/2] int_0^1 w dx.
ControlSpec reference_control();

/// d(t) = 0.2 exp(-0.4 t) sin(pi t / 2).
DisturbanceSpec reference_disturbance();

/// Names accepted by builtin_scenario().
std::vector<std::string> builtin_scenario_names();

bool is_builtin_scenario(std::string_view name);

/// Built-in runs of the reference system:
///
///  - "paper-d0":           d = 0, nonzero initial error, T = 10
///  - "paper-dsin":         damped-sine d, nonzero initial error, T = 20
///  - "paper-dsin-zero-e0": damped-sine d, w_hat(.,0) = w(.,0), T = 20
///
/// Initial data is sampled on `grid` (default N = 100, dt = 0.01, which sits
/// at Courant number 2 sqrt(2), inside the warning band).
Scenario builtin_scenario(std::string_view name, std::optional<GridConfig> grid = std::nullopt);

/// Re-samples a built-in scenario's initial data on a new grid.
void resample_builtin(Scenario& scenario, const GridConfig& grid);

}  // namespace waveuio
