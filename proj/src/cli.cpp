#include "viscoswell/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>

#include "viscoswell/config.hpp"
#include "viscoswell/errors.hpp"
#include "viscoswell/experiments.hpp"
#include "viscoswell/output.hpp"

namespace viscoswell::cli {
namespace {

using nlohmann::json;

struct CommonOptions {
  std::string preset;
  std::string config;
  std::string out = "out";
  std::optional<double> t_final;
  std::optional<std::size_t> grid;
  std::optional<double> dt;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool with_out = true, bool with_grid = true) {
  auto* preset = cmd->add_option("--preset", o.preset, "Named preset (see `presets`)");
  auto* config = cmd->add_option("--config", o.config, "JSON configuration file");
  preset->excludes(config);
  if (with_out) cmd->add_option("--out", o.out, "Output directory")->capture_default_str();
  cmd->add_option("--t-final", o.t_final, "Final dimensionless time");
  if (with_grid) cmd->add_option("--grid", o.grid, "Number of grid nodes");
  cmd->add_option("--dt", o.dt, "Macro time step");
}

experiments::ExperimentPreset resolve(const CommonOptions& o) {
  if (o.preset.empty() && o.config.empty()) {
    throw ConfigError("preset", "give --preset or --config");
  }
  auto p = o.config.empty() ? experiments::preset(o.preset) : config::load(o.config);
  if (o.t_final) config::set_horizon(p, *o.t_final);
  if (o.grid) p.grid_points = *o.grid;
  if (o.dt) p.solver.dt_star = *o.dt;
  p.validate();
  return p;
}

std::filesystem::path prepare_out(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("out", "cannot create '" + dir + "': " + ec.message());
  return dir;
}

json oracle_summary(const experiments::ExperimentPreset& p, const std::vector<double>& final_p) {
  const double force = p.schedule.force_at(p.t_final);
  try {
    const auto ss = solver::steady_state_oracle(p.params, force);
    double dev = 0.0;
    for (double x : final_p) dev = std::max(dev, std::abs(x - ss.p) / ss.p);
    return {{"force", force}, {"p_eq", ss.p}, {"g_eq", ss.g}, {"max_rel_deviation_p", dev}};
  } catch (const SimulationError& e) {
    return {{"force", force}, {"unavailable", e.what()}};
  }
}

int cmd_run(const CommonOptions& o, std::ostream& out) {
  const auto p = resolve(o);
  const auto dir = prepare_out(o.out);
  const auto rec = experiments::run_preset(p);
  const auto curve = experiments::normalize_mass_curve(rec, false);

  std::ostringstream fields, mass;
  output::write_fields_csv(fields, rec, p.field_every);
  output::write_mass_csv(mass, curve);

  const auto& counts = rec.inner_iteration_counts;
  const std::size_t total = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  const std::size_t steps = counts.size() > 1 ? counts.size() - 1 : 0;
  const auto& pf = rec.p_fields.back();
  const auto& gf = rec.g_fields.back();
  const std::size_t k = rec.samples();
  const double last_change = std::abs(rec.mass_curve[k - 1] - rec.mass_curve[k - 2]);

  json warnings = json::array();
  for (std::size_t i = 0; i < std::min<std::size_t>(rec.diagnostics.warnings.size(), 20); ++i) {
    warnings.push_back(rec.diagnostics.warnings[i]);
  }
  const json summary = {
      {"config", config::to_json(p)},
      {"samples", k},
      {"final",
       {{"t_star", rec.times.back()},
        {"boundary_p", rec.boundary_p.back()},
        {"p_min", *std::min_element(pf.begin(), pf.end())},
        {"p_max", *std::max_element(pf.begin(), pf.end())},
        {"g_min", *std::min_element(gf.begin(), gf.end())},
        {"g_max", *std::max_element(gf.begin(), gf.end())},
        {"mass_ratio", rec.mass_curve.back()}}},
      {"steady_state_oracle", oracle_summary(p, pf)},
      {"mass",
       {{"m0", curve.m0},
        {"m_inf", curve.m_inf},
        {"plateau_last_change", last_change},
        {"plateau_flat", last_change < 1e-5}}},
      {"inner_iterations",
       {{"sampled_steps", steps},
        {"total", total},
        {"max", counts.empty() ? 0 : *std::max_element(counts.begin(), counts.end())},
        {"mean", steps ? static_cast<double>(total) / static_cast<double>(steps) : 0.0}}},
      {"diagnostics",
       {{"floor_activations", rec.diagnostics.floor_activations},
        {"multiple_root_events", rec.diagnostics.multiple_root_events},
        {"pde_substeps", rec.diagnostics.pde_substeps},
        {"warning_count", rec.diagnostics.warnings.size()},
        {"warnings", warnings}}},
  };

  output::write_file((dir / "fields.csv").string(), fields.str());
  output::write_file((dir / "mass.csv").string(), mass.str());
  output::write_file((dir / "summary.json").string(), summary.dump(2) + "\n");

  out << p.name << ": " << k << " samples to t* = " << rec.times.back()
      << ", final boundary p = " << rec.boundary_p.back() << '\n';
  if (last_change >= 1e-5) {
    out << "note: mass curve not flat at t_final (last change " << last_change
        << "); normalized by the final sample\n";
  }
  out << "wrote " << (dir / "fields.csv").string() << ", mass.csv, summary.json\n";
  return 0;
}

int cmd_converge(const CommonOptions& o, std::size_t threads, std::size_t reference,
                 const std::vector<std::size_t>& grids, std::ostream& out) {
  const auto p = resolve(o);
  const auto dir = prepare_out(o.out);
  experiments::ConvergenceOptions opt;
  opt.grids = grids.empty() ? experiments::ConvergenceOptions::default_grids() : grids;
  opt.reference_grid = reference;
  opt.solver = p.solver;
  opt.threads = threads;
  if (p.schedule.horizon() < opt.probe_t) {
    throw ConfigError("t_final", "schedule must reach the probe time t* = 0.5");
  }
  const auto rep = experiments::run_convergence_study(p.params, p.schedule, opt);

  std::ostringstream csv;
  output::write_convergence_csv(csv, rep);
  const json summary = {
      {"config", config::to_json(p)},
      {"reference_grid", rep.reference_grid},
      {"reference_value", rep.reference_value},
      {"probe_z", rep.probe_z},
      {"probe_t", rep.probe_t},
      {"dt_star", rep.dt_star},
      {"noise_band", rep.noise_band},
      {"monotone", rep.monotone},
      {"error_first", rep.errors.front()},
      {"error_last", rep.errors.back()},
  };
  output::write_file((dir / "convergence.csv").string(), csv.str());
  output::write_file((dir / "summary.json").string(), summary.dump(2) + "\n");
  out << "reference N = " << rep.reference_grid << ", p(0, 0.5) = " << rep.reference_value
      << "; errors " << (rep.monotone ? "nonincreasing" : "NOT nonincreasing")
      << " within 5%; error(" << rep.grids.back() << ") = " << rep.errors.back() << ", error("
      << rep.grids.front() << ") = " << rep.errors.front() << '\n';
  return 0;
}

int cmd_compare(const CommonOptions& o, const std::string& csv_path, const std::string& mass_path,
                std::ostream& out) {
  const auto external = experiments::read_curve_csv(csv_path);
  std::vector<experiments::CurvePoint> simulated;
  if (!mass_path.empty()) {
    simulated = experiments::read_curve_csv(mass_path);
  } else {
    const auto p = resolve(o);
    const auto curve = experiments::normalize_mass_curve(experiments::run_preset(p), false);
    for (std::size_t k = 0; k < curve.times.size(); ++k) {
      simulated.push_back({curve.times[k], curve.normalized[k]});
    }
  }
  const auto cmp = experiments::compare_external_curve(simulated, external);
  const json report = {{"points", cmp.points}, {"rmse", cmp.rmse},
                       {"max_deviation", cmp.max_deviation}};
  out << report.dump() << '\n';
  return 0;
}

int cmd_presets(std::ostream& out) {
  for (const auto& name : experiments::preset_names()) {
    const auto p = experiments::preset(name);
    out << name << ": beta1=" << p.params.beta1 << " beta2=" << p.params.beta2
        << " chi=" << p.params.chi << " mu_p*=" << p.params.mu_p_star
        << " mu_G*=" << p.params.mu_G_star << " gamma*=" << p.params.gamma_star
        << " N=" << p.grid_points << " dt*=" << p.solver.dt_star << " t_final=" << p.t_final
        << " T=" << p.characteristic_time.value << ' ' << p.characteristic_time.unit << '\n';
  }
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fluid diffusion through a swelling viscoelastic solid (1D)", "viscoswell"};
  app.require_subcommand(1);

  CommonOptions run_opts, conv_opts, cmp_opts;
  auto* run = app.add_subcommand("run", "Simulate a preset or config and write CSV output");
  add_common(run, run_opts);

  auto* conv = app.add_subcommand("converge", "Grid-convergence study against a 401-node reference");
  add_common(conv, conv_opts, true, false);
  std::size_t threads = 0;
  std::size_t reference = 401;
  conv->add_option("--threads", threads, "Worker threads (0 = hardware)")->capture_default_str();
  conv->add_option("--reference", reference, "Reference grid size")->capture_default_str();
  std::vector<std::size_t> grids;
  conv->add_option("--grids", grids, "Comma-separated grid sizes (default 5,15,...,351)")
      ->delimiter(',');

  auto* cmp = app.add_subcommand("compare", "RMSE of a simulated mass curve against a CSV curve");
  add_common(cmp, cmp_opts, false);
  std::string csv_path, mass_path;
  cmp->add_option("--csv", csv_path, "External curve (time,normalized_mass)")->required();
  cmp->add_option("--mass", mass_path, "Use an existing mass.csv instead of simulating");

  auto* presets = app.add_subcommand("presets", "List the built-in presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : static_cast<int>(ErrorCategory::Config);
  }

  try {
    if (*run) return cmd_run(run_opts, out);
    if (*conv) return cmd_converge(conv_opts, threads, reference, grids, out);
    if (*cmp) return cmd_compare(cmp_opts, csv_path, mass_path, out);
    if (*presets) return cmd_presets(out);
  } catch (const SimulationError& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(e.category());
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ErrorCategory::Numeric);
  }
  return static_cast<int>(ErrorCategory::Config);
}

}  // namespace viscoswell::cli
