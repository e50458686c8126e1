#include "viscoswell/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "viscoswell/errors.hpp"

namespace viscoswell::config {
namespace {

using nlohmann::json;

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "preset",         "name",           "beta1",         "beta2",
      "chi",            "mu_p_star",      "mu_G_star",     "gamma_star",
      "N",              "dt_star",        "tolerance",     "max_inner_iters",
      "pde_substep_safety", "ode_substeps", "epsilon_floor", "pde_integrator",
      "max_rkc_stages", "rkc_tolerance", "schedule", "P_inf_star",
      "t_final",        "sample_every",   "field_every",   "characteristic_time"};
  return keys;
}

double number(const json& doc, const std::string& key) {
  const auto& v = doc.at(key);
  if (!v.is_number()) throw ConfigError(key, "expected a number");
  return v.get<double>();
}

std::size_t count(const json& doc, const std::string& key) {
  const auto& v = doc.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ConfigError(key, "expected a non-negative integer");
  }
  return v.get<std::size_t>();
}

std::string text(const json& doc, const std::string& key) {
  const auto& v = doc.at(key);
  if (!v.is_string()) throw ConfigError(key, "expected a string");
  return v.get<std::string>();
}

void read(const json& doc, const std::string& key, double& dst, bool required) {
  if (doc.contains(key)) {
    dst = number(doc, key);
  } else if (required) {
    throw ConfigError(key, "missing required key");
  }
}

void read(const json& doc, const std::string& key, std::size_t& dst) {
  if (doc.contains(key)) dst = count(doc, key);
}

solver::PdeIntegrator integrator_from(const std::string& s) {
  if (s == "rkc") return solver::PdeIntegrator::ChebyshevRkc2;
  if (s == "euler") return solver::PdeIntegrator::ForwardEuler;
  throw ConfigError("pde_integrator", "expected 'rkc' or 'euler', got '" + s + "'");
}

std::string integrator_name(solver::PdeIntegrator i) {
  return i == solver::PdeIntegrator::ForwardEuler ? "euler" : "rkc";
}

std::vector<ivp::LoadSegment> schedule_from(const json& v) {
  if (!v.is_array() || v.empty()) throw ConfigError("schedule", "expected a non-empty array");
  std::vector<ivp::LoadSegment> segs;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const auto& s = v[k];
    const std::string where = "schedule[" + std::to_string(k) + "]";
    if (!s.is_object() || !s.contains("t_end") || !s.contains("F")) {
      throw ConfigError(where, "expected an object with t_end and F");
    }
    for (const auto& [key, _] : s.items()) {
      if (key != "t_end" && key != "F") throw ConfigError(where + "." + key, "unknown key");
    }
    if (!s["t_end"].is_number()) throw ConfigError(where + ".t_end", "expected a number");
    if (!s["F"].is_number()) throw ConfigError(where + ".F", "expected a number");
    segs.push_back({s["t_end"].get<double>(), s["F"].get<double>()});
  }
  return segs;
}

}  // namespace

experiments::ExperimentPreset from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config", "top level must be an object");
  for (const auto& [key, _] : doc.items()) {
    if (!known_keys().contains(key)) throw ConfigError(key, "unknown key");
  }

  const bool base = doc.contains("preset");
  experiments::ExperimentPreset p;
  if (base) {
    p = experiments::preset(text(doc, "preset"));
  } else {
    p.name = "custom";
  }
  if (doc.contains("name")) p.name = text(doc, "name");

  auto& np = p.params;
  read(doc, "beta1", np.beta1, !base);
  read(doc, "beta2", np.beta2, !base);
  read(doc, "chi", np.chi, !base);
  read(doc, "mu_p_star", np.mu_p_star, !base);
  read(doc, "mu_G_star", np.mu_G_star, !base);
  read(doc, "gamma_star", np.gamma_star, !base);

  read(doc, "N", p.grid_points);
  auto& s = p.solver;
  read(doc, "dt_star", s.dt_star, false);
  read(doc, "tolerance", s.tolerance, false);
  read(doc, "max_inner_iters", s.max_inner_iters);
  read(doc, "pde_substep_safety", s.pde_substep_safety, false);
  read(doc, "ode_substeps", s.ode_substeps);
  read(doc, "epsilon_floor", s.epsilon_floor, false);
  if (doc.contains("pde_integrator")) s.pde_integrator = integrator_from(text(doc, "pde_integrator"));
  read(doc, "max_rkc_stages", s.max_rkc_stages);
  read(doc, "rkc_tolerance", s.rkc_tolerance, false);

  if (doc.contains("schedule")) {
    p.schedule.segments = schedule_from(doc["schedule"]);
    p.t_final = doc.contains("t_final") ? number(doc, "t_final") : p.schedule.horizon();
  } else if (doc.contains("t_final")) {
    set_horizon(p, number(doc, "t_final"));
  } else if (!base) {
    throw ConfigError("t_final", "missing required key");
  }
  read(doc, "P_inf_star", p.schedule.p_inf_star, false);
  read(doc, "sample_every", p.sample_every);
  read(doc, "field_every", p.field_every);
  if (doc.contains("characteristic_time")) {
    const auto& c = doc["characteristic_time"];
    if (!c.is_object() || !c.contains("value") || !c.contains("unit")) {
      throw ConfigError("characteristic_time", "expected an object with value and unit");
    }
    p.characteristic_time.value = number(c, "value");
    p.characteristic_time.unit = text(c, "unit");
  }

  p.validate();
  return p;
}

void set_horizon(experiments::ExperimentPreset& p, double t_final) {
  if (p.schedule.segments.size() <= 1) {
    const double force = p.schedule.segments.empty() ? 0.0 : p.schedule.segments.front().force;
    p.schedule.segments = {{t_final, force}};
  } else if (t_final > p.schedule.horizon()) {
    throw ConfigError("t_final", "beyond the load schedule horizon " +
                                     std::to_string(p.schedule.horizon()));
  }
  p.t_final = t_final;
}

experiments::ExperimentPreset parse(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("malformed JSON: ") + e.what());
  }
  return from_json(doc);
}

experiments::ExperimentPreset load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config", "cannot open '" + path + "'");
  std::stringstream buf;
  buf << f.rdbuf();
  return parse(buf.str());
}

json to_json(const experiments::ExperimentPreset& p) {
  json schedule = json::array();
  for (const auto& s : p.schedule.segments) schedule.push_back({{"t_end", s.t_end}, {"F", s.force}});
  return {
      {"name", p.name},
      {"beta1", p.params.beta1},
      {"beta2", p.params.beta2},
      {"chi", p.params.chi},
      {"mu_p_star", p.params.mu_p_star},
      {"mu_G_star", p.params.mu_G_star},
      {"gamma_star", p.params.gamma_star},
      {"N", p.grid_points},
      {"dt_star", p.solver.dt_star},
      {"tolerance", p.solver.tolerance},
      {"max_inner_iters", p.solver.max_inner_iters},
      {"pde_substep_safety", p.solver.pde_substep_safety},
      {"ode_substeps", p.solver.ode_substeps},
      {"epsilon_floor", p.solver.epsilon_floor},
      {"pde_integrator", integrator_name(p.solver.pde_integrator)},
      {"max_rkc_stages", p.solver.max_rkc_stages},
      {"rkc_tolerance", p.solver.rkc_tolerance},
      {"schedule", schedule},
      {"P_inf_star", p.schedule.p_inf_star},
      {"t_final", p.t_final},
      {"sample_every", p.sample_every},
      {"field_every", p.field_every},
      {"characteristic_time",
       {{"value", p.characteristic_time.value}, {"unit", p.characteristic_time.unit}}},
  };
}

}  // namespace viscoswell::config
