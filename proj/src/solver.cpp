#include "viscoswell/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

#include "viscoswell/errors.hpp"

namespace viscoswell::solver {
namespace {

double l2_distance(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

// Sub-step sequence chosen on the first sweep of a macro step and replayed
// on later sweeps, so the inner fixed-point map is smooth in its iterate.
struct SubstepPlan {
  std::vector<double> h;
  std::vector<std::size_t> stages;
  bool recorded = false;
};

struct PdeWorkspace {
  explicit PdeWorkspace(std::size_t n) : rhs(n), f0(n), f1(n), y0(n), y1(n), y2(n) {}
  std::vector<double> rhs, f0, f1, y0, y1, y2;
};

std::size_t clamp_to_floor(std::vector<double>& p, double floor) {
  std::size_t hits = 0;
  for (std::size_t i = 1; i + 1 < p.size(); ++i) {
    if (p[i] < floor) {
      p[i] = floor;
      ++hits;
    }
  }
  return hits;
}

// Forward-Euler sub-steps h <= safety * beta2 * dz^2 / D_max.
void advance_p_euler(std::vector<double>& p, double dt, const ivp::NondimParams& np,
                     const SolverConfig& cfg, ivp::PdeOperator& op, PdeWorkspace& ws,
                     SubstepPlan& plan, Diagnostics& diag) {
  const std::size_t n = p.size();
  const double floor = 1.0 + cfg.epsilon_floor;
  const double dz2 = op.dz() * op.dz();
  double elapsed = 0.0;
  for (std::size_t k = 0; plan.recorded ? k < plan.h.size() : elapsed < dt; ++k) {
    const double dmax = op.evaluate(p, ws.rhs);
    double h = dt - elapsed;
    if (plan.recorded) {
      h = plan.h[k];
    } else {
      if (dmax > 0.0) h = std::min(h, cfg.pde_substep_safety * np.beta2 * dz2 / dmax);
      // Avoid a sliver final sub-step.
      if (dt - elapsed - h < 1e-3 * h) h = dt - elapsed;
      plan.h.push_back(h);
    }
    for (std::size_t i = 1; i + 1 < n; ++i) p[i] += h * ws.rhs[i];
    diag.floor_activations += clamp_to_floor(p, floor);
    elapsed += h;
    ++diag.pde_substeps;
  }
  plan.recorded = true;
}

// Damped second-order Runge-Kutta-Chebyshev (Verwer, Hundsdorfer &
// Sommeijer), damping 2/13. Stability interval along the negative real
// axis is about 0.653 s^2 / rho.
struct RkcCoefficients {
  std::vector<double> mu, nu, mu_tilde, gamma_tilde;
  double mu_tilde1 = 0.0;
};

RkcCoefficients rkc_coefficients(std::size_t s) {
  const double eps = 2.0 / 13.0;
  const double ds = static_cast<double>(s);
  const double w0 = 1.0 + eps / (ds * ds);
  std::vector<double> t(s + 1), dt(s + 1), d2t(s + 1);
  t[0] = 1.0;
  t[1] = w0;
  dt[0] = 0.0;
  dt[1] = 1.0;
  d2t[0] = 0.0;
  d2t[1] = 0.0;
  for (std::size_t j = 2; j <= s; ++j) {
    t[j] = 2.0 * w0 * t[j - 1] - t[j - 2];
    dt[j] = 2.0 * t[j - 1] + 2.0 * w0 * dt[j - 1] - dt[j - 2];
    d2t[j] = 4.0 * dt[j - 1] + 2.0 * w0 * d2t[j - 1] - d2t[j - 2];
  }
  const double w1 = dt[s] / d2t[s];
  std::vector<double> b(s + 1);
  for (std::size_t j = 2; j <= s; ++j) b[j] = d2t[j] / (dt[j] * dt[j]);
  b[0] = b[1] = b[2];

  RkcCoefficients c;
  c.mu.assign(s + 1, 0.0);
  c.nu.assign(s + 1, 0.0);
  c.mu_tilde.assign(s + 1, 0.0);
  c.gamma_tilde.assign(s + 1, 0.0);
  c.mu_tilde1 = b[1] * w1;
  for (std::size_t j = 2; j <= s; ++j) {
    c.mu[j] = 2.0 * b[j] * w0 / b[j - 1];
    c.nu[j] = -b[j] / b[j - 2];
    c.mu_tilde[j] = 2.0 * b[j] * w1 / b[j - 1];
    c.gamma_tilde[j] = -(1.0 - b[j - 1] * t[j - 1]) * c.mu_tilde[j];
  }
  return c;
}

// Error-controlled RKC: each step carries the embedded estimate
// (12 (y_n - y_{n+1}) + 6 h (F_n + F_{n+1})) / 15, measured in RMS against
// `rkc_tolerance`, and h follows the usual cube-root controller.
void advance_p_rkc(std::vector<double>& p, double dt, const ivp::NondimParams& np,
                   const SolverConfig& cfg, ivp::PdeOperator& op, PdeWorkspace& ws,
                   SubstepPlan& plan, Diagnostics& diag) {
  const std::size_t n = p.size();
  const double floor = 1.0 + cfg.epsilon_floor;
  const double dz2 = op.dz() * op.dz();
  const double stages_max = static_cast<double>(std::max<std::size_t>(cfg.max_rkc_stages, 2));
  // Gershgorin bound of the three-point operator.
  auto spectral_radius = [&](double dmax) { return 4.0 * dmax / (np.beta2 * dz2); };

  double elapsed = 0.0;
  double rho = spectral_radius(op.evaluate(p, ws.f0));
  double h = dt;
  for (std::size_t k = 0; plan.recorded ? k < plan.h.size() : elapsed < dt;) {
    std::size_t s = 0;
    if (plan.recorded) {
      h = plan.h[k];
      s = plan.stages[k];
    } else {
      // Stage count 1 + sqrt(1 + 1.54 h rho) keeps h rho inside the
      // stability interval, which is near 0.653 (s^2 - 1).
      const double cap = ((stages_max - 1.0) * (stages_max - 1.0) - 1.0) / 1.54;
      if (rho > 0.0) h = std::min(h, cap / rho);
      h = std::min(h, dt - elapsed);
      if (dt - elapsed - h < 1e-3 * h) h = dt - elapsed;
      s = static_cast<std::size_t>(
          std::max(2.0, 1.0 + std::floor(std::sqrt(1.0 + 1.54 * h * rho))));
    }
    const RkcCoefficients c = rkc_coefficients(s);

    // y0 = Y_{j-2}, y1 = Y_{j-1}, y2 = Y_j
    ws.y0 = p;
    for (std::size_t i = 0; i < n; ++i) ws.y1[i] = p[i] + c.mu_tilde1 * h * ws.f0[i];
    for (std::size_t j = 2; j <= s; ++j) {
      op.evaluate(ws.y1, ws.rhs);
      const double mu = c.mu[j], nu = c.nu[j];
      const double mt = c.mu_tilde[j] * h, gt = c.gamma_tilde[j] * h;
      const double keep = 1.0 - mu - nu;
      for (std::size_t i = 0; i < n; ++i) {
        ws.y2[i] = keep * p[i] + mu * ws.y1[i] + nu * ws.y0[i] + mt * ws.rhs[i] + gt * ws.f0[i];
      }
      ws.y0.swap(ws.y1);
      ws.y1.swap(ws.y2);
    }
    // Dirichlet walls stay exact; the stage weights only sum to 1 in round-off.
    ws.y1.front() = p.front();
    ws.y1.back() = p.back();
    diag.pde_substeps += s;
    const std::size_t clamped = clamp_to_floor(ws.y1, floor);
    const bool more = plan.recorded ? k + 1 < plan.h.size() : true;
    double rho_next = rho;
    if (more) rho_next = spectral_radius(op.evaluate(ws.y1, ws.f1));

    if (!plan.recorded) {
      double sum = 0.0;
      for (std::size_t i = 1; i + 1 < n; ++i) {
        const double est = (12.0 * (p[i] - ws.y1[i]) + 6.0 * h * (ws.f0[i] + ws.f1[i])) / 15.0;
        sum += est * est;
      }
      const double err = std::sqrt(sum / static_cast<double>(n - 2)) / cfg.rkc_tolerance;
      const double factor = std::clamp(0.8 * std::cbrt(1.0 / std::max(err, 1e-10)), 0.1, 10.0);
      if (err > 1.0) {
        h *= std::min(factor, 0.5);
        continue;
      }
      plan.h.push_back(h);
      plan.stages.push_back(s);
      elapsed += h;
      h *= factor;
    }
    p.swap(ws.y1);
    ws.f0.swap(ws.f1);
    rho = rho_next;
    diag.floor_activations += clamped;
    ++k;
  }
  plan.recorded = true;
}

// Transport of p over dt with g frozen and Dirichlet walls. Overwrites `p`.
void advance_p(std::vector<double>& p, double wall_left, double wall_right, double dt,
               const ivp::NondimParams& np, const SolverConfig& cfg, ivp::PdeOperator& op,
               PdeWorkspace& ws, SubstepPlan& plan, Diagnostics& diag) {
  p.front() = wall_left;
  p.back() = wall_right;
  if (cfg.pde_integrator == PdeIntegrator::ForwardEuler) {
    advance_p_euler(p, dt, np, cfg, op, ws, plan, diag);
  } else {
    advance_p_rkc(p, dt, np, cfg, op, ws, plan, diag);
  }
}

// Classical RK4 for dg/dt at fixed p, node by node.
void advance_g(std::vector<double>& g, const std::vector<double>& p, double dt,
               const ivp::NondimParams& np, std::size_t substeps) {
  const double h = dt / static_cast<double>(substeps);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double pi = p[i];
    double y = g[i];
    for (std::size_t k = 0; k < substeps; ++k) {
      const double k1 = ivp::g_rate(pi, y, np);
      const double k2 = ivp::g_rate(pi, y + 0.5 * h * k1, np);
      const double k3 = ivp::g_rate(pi, y + 0.5 * h * k2, np);
      const double k4 = ivp::g_rate(pi, y + h * k3, np);
      y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    if (!(std::isfinite(y) && y > 0.0)) {
      throw NumericError("natural stretch g became non-positive or non-finite at node " +
                             std::to_string(i),
                         i);
    }
    g[i] = y;
  }
}

}  // namespace

void SolverConfig::validate() const {
  if (!(dt_star > 0.0) || !std::isfinite(dt_star)) throw ConfigError("dt_star", "must be positive");
  if (!(tolerance > 0.0)) throw ConfigError("tolerance", "must be positive");
  if (max_inner_iters < 1) throw ConfigError("max_inner_iters", "must be at least 1");
  if (!(pde_substep_safety > 0.0 && pde_substep_safety < 1.0)) {
    throw ConfigError("pde_substep_safety", "must lie in (0, 1)");
  }
  if (ode_substeps < 1) throw ConfigError("ode_substeps", "must be at least 1");
  if (!(epsilon_floor > 0.0 && epsilon_floor < 1e-3)) {
    throw ConfigError("epsilon_floor", "must lie in (0, 1e-3)");
  }
  if (max_rkc_stages < 2) throw ConfigError("max_rkc_stages", "must be at least 2");
  if (!(rkc_tolerance > 0.0 && rkc_tolerance < 1.0)) {
    throw ConfigError("rkc_tolerance", "must lie in (0, 1)");
  }
}

ivp::State1D step(const ivp::State1D& state, const ivp::LoadSchedule& schedule,
                  const ivp::NondimParams& np, const SolverConfig& cfg, Diagnostics& diag,
                  StepInfo* info) {
  const std::size_t n = state.size();
  const double dt = cfg.dt_star;
  // Force on this step: the segment containing the step midpoint.
  const double force = schedule.force_at(state.t_star + 0.5 * dt);
  const double floor = 1.0 + cfg.epsilon_floor;

  std::vector<double> p_start = state.p;
  for (auto& v : p_start) {
    if (v < floor) {
      v = floor;
      ++diag.floor_activations;
    }
  }

  ivp::PdeOperator op(n, np, cfg.epsilon_floor);
  PdeWorkspace ws(n);
  SubstepPlan plan;
  std::vector<double> p_prev = p_start;  // p^{(l)}
  std::vector<double> p_next(n);         // p^{(l+1)}
  std::vector<double> g_iter = state.g;  // g^{(l)}
  std::vector<double> g_next(n);

  diag.last_inner_residuals.clear();
  double residual = 0.0;
  double p_wall = 0.0;
  for (std::size_t l = 0; l < cfg.max_inner_iters; ++l) {
    // (a) wall values from the stress balance with the current wall g.
    const ivp::BoundaryRoot left = ivp::solve_boundary(g_iter.front(), force, np);
    if (left.sign_changes > 1) {
      ++diag.multiple_root_events;
      if (diag.multiple_root_events == 1) {
        diag.warnings.push_back("multiple boundary roots at t* = " +
                                std::to_string(state.t_star) + "; smallest taken");
      }
    }
    p_wall = left.p;
    const double p_wall_right = g_iter.back() == g_iter.front()
                                    ? p_wall
                                    : ivp::solve_boundary(g_iter.back(), force, np).p;

    // (b) p transport from the start of the step, g frozen at the iterate.
    p_next = p_start;
    op.set_natural_config(g_iter);
    advance_p(p_next, p_wall, p_wall_right, dt, np, cfg, op, ws, plan, diag);

    // (c) g evolution from the start-of-step value with the fresh p frozen.
    g_next = state.g;
    advance_g(g_next, p_next, dt, np, cfg.ode_substeps);

    residual = l2_distance(p_next, p_prev);
    diag.last_inner_residuals.push_back(residual);
    p_prev.swap(p_next);
    g_iter.swap(g_next);
    if (residual < cfg.tolerance) {
      if (info) {
        info->inner_iterations = l + 1;
        info->boundary_p = p_wall;
        info->residual = residual;
      }
      return {state.t_star + dt, std::move(p_prev), std::move(g_iter)};
    }
  }
  throw NonConvergenceError("staggered iteration did not converge in " +
                                std::to_string(cfg.max_inner_iters) +
                                " sweeps; ||dp||_2 = " + std::to_string(residual),
                            residual);
}

RunRecord run(const ivp::State1D& initial, const ivp::LoadSchedule& schedule,
              const ivp::NondimParams& np, const SolverConfig& cfg, double t_final,
              std::size_t sample_every) {
  initial.validate();
  np.validate();
  cfg.validate();
  schedule.validate();
  if (sample_every < 1) throw ConfigError("sample_every", "must be at least 1");
  if (t_final < initial.t_star) throw ConfigError("t_final", "precedes the initial time");

  RunRecord rec;
  auto sample = [&](const ivp::State1D& s, double boundary, std::size_t iters) {
    rec.times.push_back(s.t_star);
    rec.p_fields.push_back(s.p);
    rec.g_fields.push_back(s.g);
    rec.mass_curve.push_back(ivp::mass_ratio(s, np));
    rec.boundary_p.push_back(boundary);
    rec.inner_iteration_counts.push_back(iters);
  };
  sample(initial, initial.p.front(), 0);

  // Step count fixed up front so time never accumulates round-off.
  const double span = t_final - initial.t_star;
  const auto steps = static_cast<std::size_t>(std::llround(std::ceil(span / cfg.dt_star - 1e-9)));
  if (steps > 0 && initial.t_star + static_cast<double>(steps) * cfg.dt_star >
                       schedule.horizon() + 1e-9 * cfg.dt_star) {
    throw ConfigError("t_final", "run extends beyond the load schedule horizon");
  }

  ivp::State1D current = initial;
  for (std::size_t k = 1; k <= steps; ++k) {
    StepInfo info;
    try {
      current = step(current, schedule, np, cfg, rec.diagnostics, &info);
    } catch (const NonConvergenceError& e) {
      throw NonConvergenceError("t* = " + std::to_string(current.t_star) + ": " + e.what(),
                                e.residual());
    } catch (const BoundaryError& e) {
      throw BoundaryError("t* = " + std::to_string(current.t_star) + ": " + e.what());
    } catch (const NumericError& e) {
      throw NumericError("t* = " + std::to_string(current.t_star) + ": " + e.what(), e.node());
    }
    current.t_star = initial.t_star + static_cast<double>(k) * cfg.dt_star;
    if (k % sample_every == 0 || k == steps) sample(current, info.boundary_p, info.inner_iterations);
  }
  return rec;
}

SteadyState steady_state_oracle(const ivp::NondimParams& np, double force) {
  if (!(np.mu_G_star > 0.0)) {
    throw ConfigError("mu_G_star",
                      "steady state undefined for mu_G* = 0 (g grows without bound); "
                      "use the elastic-limit regime instead");
  }
  if (!(np.mu_p_star > 0.0)) {
    throw ConfigError("mu_p_star", "steady state undefined for mu_p* = 0 (g collapses to 0)");
  }
  const double ratio = std::sqrt(std::sqrt(np.mu_p_star / np.mu_G_star));
  auto g_of = [&](double p) { return ratio * std::sqrt(p); };
  auto h = [&](double p) { return ivp::tzz_sf(p, g_of(p), np) + force; };

  double lo = 1.0 + 1e-9, hi = 50.0;
  double flo = h(lo), fhi = h(hi);
  if ((flo < 0.0) == (fhi < 0.0)) {
    throw BoundaryError("steady_state_oracle: no equilibrium in p in (1 + 1e-9, 50)");
  }
  for (int it = 0; it < 200 && hi - lo > 2.0 * std::numeric_limits<double>::epsilon() * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = h(mid);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  const double p = 0.5 * (lo + hi);
  return {p, g_of(p)};
}

}  // namespace viscoswell::solver
