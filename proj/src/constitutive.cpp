#include "viscoswell/constitutive.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "viscoswell/errors.hpp"

namespace viscoswell::constitutive {
namespace {

void require_positive(double v, const char* field) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(field, "must be positive and finite");
}

void require_nonnegative(double v, const char* field) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError(field, "must be non-negative and finite");
}

// Phi-dependent bracket of the Flory-Huggins term divided by phi:
// [(1 - phi) ln(1 - phi) - chi phi^2] / phi.
double mixing_bracket(double phi, double chi, MixingLimit mode) {
  if (!(phi > 0.0) || phi > 1.0) throw std::domain_error("solid volume fraction outside (0, 1]");
  double xlogx = 0.0;
  if (phi < 1.0) {
    xlogx = (1.0 - phi) * std::log1p(-phi);
  } else if (mode == MixingLimit::Strict) {
    throw std::domain_error("mixing term singular at phi_s = 1 (request limit mode)");
  }
  return (xlogx - chi * phi * phi) / phi;
}

// ln(1 - phi) + phi + chi phi^2
double mixing_pressure_bracket(double phi, double chi) {
  if (!(phi > 0.0) || phi >= 1.0) {
    throw std::domain_error("mixing pressure singular for phi_s >= 1");
  }
  return std::log1p(-phi) + phi + chi * phi * phi;
}

// Common isotropic part shared by T_p and T_G:
// (rho/rho_s)[mu_p (I_p - 3) + mu_G (I_G - 3)] + rho R theta J/(rho_R_f V0) [mixing].
struct StressParts {
  double ratio = 0.0;  // rho / rho_s
  double mu_p = 0.0;
  double mu_G = 0.0;
  DiagTensor3 B_p;
  DiagTensor3 B_G;
  double isotropic = 0.0;
};

StressParts stress_parts(const MaterialParams& params, const MixtureState& s) {
  const Jacobians jac = jacobians(s.F, s.G);
  // rho J_p J_G / rho_R_s and rho / rho_s agree only under phi_s = 1/det F.
  const double ratio_kin = s.rho * jac.elastic * jac.natural / params.rho_R_s;
  const double ratio = s.rho / s.rho_s;
  if (std::abs(ratio_kin - ratio) > 1e-10 * std::abs(ratio)) {
    throw std::domain_error("state violates phi_s = 1/det F");
  }
  StressParts out;
  out.ratio = ratio;
  out.mu_p = params.mu_p_bar(s.theta);
  out.mu_G = params.mu_G_bar(s.theta);
  out.B_p = s.B_p();
  out.B_G = s.B_G();
  const double ip = invariants(out.B_p).first;
  const double ig = invariants(out.B_G).first;
  const double mixing = s.rho * params.R * s.theta * jac.elastic * jac.natural /
                        (params.rho_R_f * params.V0) *
                        mixing_pressure_bracket(s.phi_s, params.chi);
  out.isotropic = ratio * (out.mu_p * (ip - 3.0) + out.mu_G * (ig - 3.0)) + mixing;
  return out;
}

}  // namespace

void MaterialParams::validate(double theta_min, double theta_max) const {
  require_positive(rho_R_s, "rho_R_s");
  require_positive(rho_R_f, "rho_R_f");
  require_positive(V0, "V0");
  require_positive(R, "R");
  require_positive(theta_s, "theta_s");
  require_nonnegative(gamma, "gamma");
  require_nonnegative(alpha, "alpha");
  require_nonnegative(nu, "nu");
  if (!(theta_min > 0.0) || theta_max < theta_min) {
    throw ConfigError("theta_range", "must satisfy 0 < theta_min <= theta_max");
  }
  // Effective moduli are affine in theta: checking the endpoints suffices.
  for (double th : {theta_min, theta_max}) {
    if (mu_p_bar(th) < 0.0) throw ConfigError("mu_p1", "effective modulus mu_p negative in range");
    if (mu_G_bar(th) < 0.0) throw ConfigError("mu_G1", "effective modulus mu_G negative in range");
  }
}

MixtureState MixtureState::from_kinematics(const MaterialParams& params, const DiagTensor3& F,
                                           const DiagTensor3& G, double theta) {
  if (!F.all_finite() || !G.all_finite()) throw std::domain_error("non-finite kinematics");
  const double detF = F.det();
  if (!(detF >= 1.0)) {
    // phi_s = 1/det F must lie in (0, 1]: the mixture cannot be denser than dry solid.
    throw std::domain_error("det F < 1 gives solid volume fraction above one");
  }
  if (!(theta > 0.0)) throw std::domain_error("temperature must be positive");
  MixtureState s;
  s.F = F;
  s.G = G;
  s.theta = theta;
  s.phi_s = 1.0 / detF;
  s.rho_s = params.rho_R_s * s.phi_s;
  s.rho_f = params.rho_R_f * (1.0 - s.phi_s);
  s.rho = s.rho_s + s.rho_f;
  return s;
}

double helmholtz(const MaterialParams& p, const MixtureState& s, MixingLimit mode) {
  const double th = s.theta;
  const double dth = th - p.theta_s;
  const double thermal = p.A_s + (p.B_s + p.c2_s) * dth - 0.5 * p.c1_s * dth * dth -
                         p.c2_s * th * std::log(th / p.theta_s);
  const double ig = invariants(s.B_G()).first;
  const double ip = invariants(s.B_p()).first;
  const double elastic = (p.mu_G0 - p.mu_G1 * th) / (s.rho_s * p.theta_s) * (ig - 3.0) +
                         (p.mu_p0 - p.mu_p1 * th) / (s.rho_s * p.theta_s) * (ip - 3.0);
  const double mixing = p.R * th / (p.rho_R_f * p.V0) * mixing_bracket(s.phi_s, p.chi, mode);
  return thermal + elastic + mixing;
}

double entropy(const MaterialParams& p, const MixtureState& s, MixingLimit mode) {
  const double th = s.theta;
  const double thermal = -(p.B_s + p.c2_s) + p.c1_s * (th - p.theta_s) +
                         p.c2_s * std::log(th / p.theta_s) + p.c2_s;
  const double ig = invariants(s.B_G()).first;
  const double ip = invariants(s.B_p()).first;
  // Divided by rho_s, matching the potential it differentiates.
  const double elastic = p.mu_G1 / (s.rho_s * p.theta_s) * (ig - 3.0) +
                         p.mu_p1 / (s.rho_s * p.theta_s) * (ip - 3.0);
  const double mixing = -p.R / (p.rho_R_f * p.V0) * mixing_bracket(s.phi_s, p.chi, mode);
  return thermal + elastic + mixing;
}

double internal_energy(const MaterialParams& p, const MixtureState& s) {
  const double th = s.theta;
  const double ig = invariants(s.B_G()).first;
  const double ip = invariants(s.B_p()).first;
  return p.A_s - p.B_s * p.theta_s + p.c2_s * (th - p.theta_s) +
         0.5 * p.c1_s * (th * th - p.theta_s * p.theta_s) +
         p.mu_G0 / (s.rho_s * p.theta_s) * (ig - 3.0) +
         p.mu_p0 / (s.rho_s * p.theta_s) * (ip - 3.0);
}

double heat_capacity(const MaterialParams& p, double theta) { return p.c1_s * theta + p.c2_s; }

DiagTensor3 stress_Tp(const MaterialParams& params, const MixtureState& state) {
  const StressParts sp = stress_parts(params, state);
  return (2.0 * sp.ratio * sp.mu_p) * sp.B_p + DiagTensor3::scalar(sp.isotropic);
}

DiagTensor3 stress_TG(const MaterialParams& params, const MixtureState& state) {
  const StressParts sp = stress_parts(params, state);
  return (2.0 * sp.ratio * sp.mu_G) * sp.B_G + DiagTensor3::scalar(sp.isotropic);
}

DiagTensor3 partial_stress_solid(const MaterialParams& params, const MixtureState& state,
                                 double lambda) {
  return DiagTensor3::scalar(-lambda * state.phi_s) + stress_Tp(params, state);
}

DiagTensor3 partial_stress_fluid(const MaterialParams& params, const MixtureState& state,
                                 double lambda, const DiagTensor3& fluid_stretching) {
  return DiagTensor3::scalar(-lambda * state.phi_f()) + params.nu * fluid_stretching;
}

double interaction_force_1d(const MaterialParams& params, const MixtureState& state,
                            const InteractionInputs& in) {
  return in.lambda * in.dphi_s_dz - params.alpha * in.v_rel + state.rho_f * in.dpsi_dz;
}

double interaction_force_fluid_1d(const MaterialParams& params, const MixtureState& state,
                                  const InteractionInputs& in) {
  return -interaction_force_1d(params, state, in);
}

DiagTensor3 natural_config_rate(const MaterialParams& params, const MixtureState& state) {
  if (!(params.gamma > 0.0)) {
    throw std::domain_error("natural_config_rate: gamma must be positive");
  }
  const double mu_p = params.mu_p_bar(state.theta);
  const double mu_G = params.mu_G_bar(state.theta);
  const double scale = 2.0 * state.rho / (state.rho_s * params.gamma);
  return scale * (mu_p * state.B_p() - mu_G * state.B_G());
}

double dissipation_rate(const MaterialParams& params, const DiagTensor3& D_G, double v_rel,
                        const DiagTensor3& fluid_stretching) {
  return params.gamma * D_G.norm_squared() + params.alpha * v_rel * v_rel +
         params.nu * fluid_stretching.norm_squared();
}

namespace sls {

DiagTensor3 evolution_rhs(const MaterialParams& params, double theta, const DiagTensor3& B_p,
                          const DiagTensor3& B_G) {
  const double mu_p = params.mu_p_bar(theta);
  const double mu_G = params.mu_G_bar(theta);
  const double iso = (2.0 / 3.0) * (mu_p * B_p.trace() - mu_G * B_G.trace());
  return (2.0 * mu_p) * B_p - (2.0 * mu_G) * B_G - DiagTensor3::scalar(iso);
}

DiagTensor3 stress(double p_lagrange, const MaterialParams& params, double theta,
                   const DiagTensor3& B_p) {
  return DiagTensor3::scalar(p_lagrange) + (2.0 * params.mu_p_bar(theta)) * B_p;
}

}  // namespace sls

}  // namespace viscoswell::constitutive
