#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "viscoswell/experiments.hpp"

namespace viscoswell::config {

/// Builds a run configuration from a JSON object with flat keys
/// (beta1, beta2, chi, mu_p_star, mu_G_star, gamma_star, N, dt_star,
/// tolerance, schedule, P_inf_star, t_final, ...). With a "preset" key the
/// named preset supplies defaults; otherwise the six material groups and
/// t_final are required. Unknown keys and type errors raise ConfigError
/// naming the key. The result is validated.
experiments::ExperimentPreset from_json(const nlohmann::json& doc);

/// Sets t_final. A single-segment schedule is stretched to the new
/// horizon; a multi-segment schedule is kept and must cover it.
void set_horizon(experiments::ExperimentPreset& preset, double t_final);

/// Parses JSON text; syntax errors raise ConfigError("config", ...).
experiments::ExperimentPreset parse(std::string_view text);
experiments::ExperimentPreset load(const std::string& path);

/// Full serialization; from_json(to_json(p)) == p.
nlohmann::json to_json(const experiments::ExperimentPreset& preset);

}  // namespace viscoswell::config
