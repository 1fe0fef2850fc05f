#pragma once

#include <filesystem>

#include <nlohmann/json.hpp>

#include "waveuio/certificates.hpp"
#include "waveuio/model.hpp"
#include "waveuio/scenarios.hpp"
#include "waveuio/synthesis.hpp"

namespace waveuio {

using Json = nlohmann::json;

/// Reads and parses a JSON file. Throws ConfigError on I/O or parse failure.
Json read_json_file(const std::filesystem::path& path);

/// Pretty-printed, trailing newline.
void write_json_file(const std::filesystem::path& path, const Json& doc);

// Matrices are row-major arrays of arrays. A flat array of numbers is read
// as a column vector.
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, const char* name);

SystemSpec system_from_json(const Json& j);
Json to_json(const SystemSpec& sys);

ObserverSpec observer_from_json(const Json& j);
Json to_json(const ObserverSpec& obs);

Json to_json(const ResidualReport& r);

/// observer.json: observer matrices plus alpha, nullspace_dim and residuals.
Json to_json(const SynthesisSolution& s);

/// Accepts scalar form {"p", "g", "delta", "mu"?} or matrix form
/// {"P", "Gamma", "delta", "mu"?}.
Certificate certificate_from_json(const Json& j, Index n);
Json to_json(const Certificate& c);

Json to_json(const CertificateReport& r);

Json to_json(const GridConfig& g);
GridConfig grid_from_json(const Json& j, GridConfig defaults = {});

DisturbanceSpec disturbance_from_json(const Json& j, Index d_dim);
Json to_json(const DisturbanceSpec& d);

ControlSpec control_from_json(const Json& j, Index p);
Json to_json(const ControlSpec& c);

/// scenario.json. With "builtin" set, the built-in scenario is the base and
/// the remaining keys override it; grid changes re-sample its initial data.
/// Without it, "initial" must carry w0, w1 and either what0/what1 or z0/z1.
Scenario scenario_from_json(const Json& j, const SystemSpec& sys);

}  // namespace waveuio
