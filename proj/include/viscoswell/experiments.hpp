#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "viscoswell/ivp1d.hpp"
#include "viscoswell/solver.hpp"

namespace viscoswell::experiments {

/// Physical value of the characteristic time T, used only to label axes.
struct CharacteristicTime {
  double value = 1.0;
  std::string unit = "s";

  friend bool operator==(const CharacteristicTime&, const CharacteristicTime&) = default;
};

struct ExperimentPreset {
  std::string name;
  ivp::NondimParams params;
  std::size_t grid_points = 301;
  solver::SolverConfig solver;
  ivp::LoadSchedule schedule;
  double t_final = 1.5;
  std::size_t sample_every = 1;
  std::size_t field_every = 4;  // thinning of written field snapshots
  CharacteristicTime characteristic_time;

  void validate() const;

  friend bool operator==(const ExperimentPreset&, const ExperimentPreset&) = default;
};

/// dmso-pmda-oda, nmp-pmda-oda, water-hfpe, compress-cycle
std::vector<std::string> preset_names();

/// Throws ConfigError("preset", ...) for an unknown name.
ExperimentPreset preset(std::string_view name);

/// Solver run of a preset from the dry state.
solver::RunRecord run_preset(const ExperimentPreset& preset);

struct MassCurve {
  std::vector<double> times;
  std::vector<double> mass_ratio;
  std::vector<double> normalized;
  double m0 = 1.0;
  double m_inf = 1.0;
};

/// Normalises a recorded mass curve by its first and last samples.
/// `require_flat` enforces |m_last - m_prev| < flat_tol and throws
/// ConfigError("t_final", ...) otherwise.
MassCurve normalize_mass_curve(const solver::RunRecord& record, bool require_flat,
                               double flat_tol = 1e-5);

struct MassUptake {
  MassCurve curve;
  solver::RunRecord record;
};

/// Free-swell mass uptake; the plateau at t_final must be flat.
MassUptake run_mass_uptake(const ExperimentPreset& preset);

struct ConvergenceOptions {
  std::vector<std::size_t> grids;
  std::size_t reference_grid = 401;
  double probe_z = 0.0;
  double probe_t = 0.5;
  solver::SolverConfig solver;
  /// 0 means hardware concurrency.
  std::size_t threads = 0;

  /// 5, 15, 25, ..., 345, 351
  static std::vector<std::size_t> default_grids();
};

struct ConvergenceReport {
  std::vector<std::size_t> grids;
  std::size_t reference_grid = 0;
  double probe_z = 0.0;
  double probe_t = 0.0;
  double dt_star = 0.0;
  std::vector<double> probe_values;
  double reference_value = 0.0;
  std::vector<double> errors;
  double noise_band = 0.05;
  bool monotone = false;
};

/// Linear interpolation of a nodal field at Z*.
double probe_field(const std::vector<double>& field, double z);

/// Errors |p_N(probe) - p_ref(probe)| per grid against a finer reference.
/// Run failures are rethrown with the grid size attached.
ConvergenceReport run_convergence_study(const ivp::NondimParams& np,
                                        const ivp::LoadSchedule& schedule,
                                        const ConvergenceOptions& options);

/// True when every error is at most (1 + band) times its predecessor.
bool nonincreasing_within(const std::vector<double>& errors, double band);

struct CurvePoint {
  double time = 0.0;
  double value = 0.0;
};

/// Reads a two-column curve. The header must name a time column (`time`
/// or `t_star`) and a `normalized_mass` column; other columns are ignored.
/// Throws ConfigError("csv", ...) on malformed input.
std::vector<CurvePoint> parse_curve_csv(std::string_view text);
std::vector<CurvePoint> read_curve_csv(const std::string& path);

struct CurveComparison {
  double rmse = 0.0;
  double max_deviation = 0.0;
  std::size_t points = 0;
};

/// Interpolates the simulated curve onto the external times. Throws
/// ConfigError when the external data has fewer than two points, is not
/// strictly increasing in time, or leaves the simulated horizon.
CurveComparison compare_external_curve(const std::vector<CurvePoint>& simulated,
                                       const std::vector<CurvePoint>& external);

}  // namespace viscoswell::experiments
