#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "viscoswell/ivp1d.hpp"

namespace viscoswell::solver {

/// Time integrator for the p* transport sub-problem.
enum class PdeIntegrator {
  ForwardEuler,    // fixed explicit sub-steps under the diffusive limit
  ChebyshevRkc2,   // stabilised explicit Runge-Kutta-Chebyshev, 2nd order
};

struct SolverConfig {
  double dt_star = 0.025;
  double tolerance = 1e-4;  // on ||p^{l+1} - p^l||_2
  std::size_t max_inner_iters = 50;
  double pde_substep_safety = 0.4;  // forward Euler: h <= safety beta2 dz^2 / D
  std::size_t ode_substeps = 10;
  double epsilon_floor = 1e-10;
  PdeIntegrator pde_integrator = PdeIntegrator::ChebyshevRkc2;
  std::size_t max_rkc_stages = 64;
  /// RMS bound on the local error estimate of each RKC step.
  double rkc_tolerance = 1e-11;

  void validate() const;

  friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

/// Accumulated per-run diagnostics.
struct Diagnostics {
  std::vector<std::string> warnings;
  std::size_t floor_activations = 0;
  std::size_t multiple_root_events = 0;
  std::size_t pde_substeps = 0;
  /// ||p^{l+1} - p^l||_2 for every inner iterate of the most recent step.
  std::vector<double> last_inner_residuals;
};

struct StepInfo {
  std::size_t inner_iterations = 0;
  double boundary_p = 0.0;
  double residual = 0.0;
};

/// Advances one macro step of the staggered p/g scheme. Throws
/// NonConvergenceError, NumericError or BoundaryError.
ivp::State1D step(const ivp::State1D& state, const ivp::LoadSchedule& schedule,
                  const ivp::NondimParams& np, const SolverConfig& cfg, Diagnostics& diag,
                  StepInfo* info = nullptr);

struct RunRecord {
  std::vector<double> times;
  std::vector<std::vector<double>> p_fields;
  std::vector<std::vector<double>> g_fields;
  std::vector<double> mass_curve;
  std::vector<double> boundary_p;
  std::vector<std::size_t> inner_iteration_counts;  // 0 for the initial sample
  Diagnostics diagnostics;

  std::size_t samples() const { return times.size(); }
  ivp::State1D state(std::size_t k) const { return {times[k], p_fields[k], g_fields[k]}; }
};

/// Repeated step() up to t_final, sampling every `sample_every` steps plus
/// the initial and final states. Step failures are rethrown with the
/// failing time prepended.
RunRecord run(const ivp::State1D& initial, const ivp::LoadSchedule& schedule,
              const ivp::NondimParams& np, const SolverConfig& cfg, double t_final,
              std::size_t sample_every = 1);

struct SteadyState {
  double p = 0.0;
  double g = 0.0;
};

/// Uniform equilibrium: T_zz^{sf*}(p, g) = -F* together with the g fixed
/// point mu_p (p/g)^2 = mu_G g^2, found by bisection in p. Requires
/// mu_G_star > 0; throws ConfigError otherwise and BoundaryError when the
/// bracket holds no root.
SteadyState steady_state_oracle(const ivp::NondimParams& np, double force);

}  // namespace viscoswell::solver
