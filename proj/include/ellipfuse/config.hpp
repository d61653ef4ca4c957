#pragma once

#include <string>
#include <variant>

#include <json.hpp>

#include "ellipfuse/montecarlo_types.hpp"
#include "ellipfuse/netsim.hpp"

namespace ellipfuse {

/// JSON conversions for the wire formats shared by all CLI commands.
/// Ellipsoid: {"center": [x, y], "shape": [[a, b], [b, c]]}, meters / m^2.
/// Sensor:    {"pose": [x, y], "r_min": m, "r_max": m, "sigma_deg": d}.
nlohmann::json to_json(const Ellipsoid& e);
nlohmann::json to_json(const SensorParams& s);
Ellipsoid ellipsoid_from_json(const nlohmann::json& j, const std::string& path);
SensorParams sensor_from_json(const nlohmann::json& j, const std::string& path);

/// Strict parsers: unknown fields are rejected, and every violation is
/// reported with a JSON-pointer-style field path.
ScenarioConfig scenario_from_json(const nlohmann::json& j, const std::string& path = "");
MonteCarloConfig montecarlo_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ScenarioConfig& c);
nlohmann::json to_json(const MonteCarloConfig& c);

using AnyConfig = std::variant<ScenarioConfig, MonteCarloConfig>;

/// Loads either config kind from a file; a top-level "runs" field selects the
/// Monte Carlo form. Throws IoError on filesystem problems, ConfigError on
/// parse/validation failure.
AnyConfig load_config(const std::string& file_path);

/// Parses an {"ei": ..., "ej": ...} ellipsoid pair file.
std::pair<Ellipsoid, Ellipsoid> load_ellipsoid_pair(const std::string& file_path);

} // namespace ellipfuse
