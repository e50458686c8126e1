#pragma once

#include "viscoswell/tensor.hpp"

namespace viscoswell::constitutive {

/// Dimensional constants of the viscoelastic-solid / fluid mixture.
/// Units: moduli in Pa (mu_*0) and Pa/K (mu_*1), temperatures in K,
/// densities in kg/m^3, molar volume in m^3/mol.
struct MaterialParams {
  double mu_p0 = 0.0;
  double mu_p1 = 0.0;
  double mu_G0 = 0.0;
  double mu_G1 = 0.0;
  double theta_s = 300.0;
  double R = 8.314462618;
  double V0 = 1e-4;
  double chi = 0.0;
  double rho_R_s = 1.0;
  double rho_R_f = 1.0;
  double gamma = 0.0;  // solid dissipation coefficient (Pa s)
  double alpha = 0.0;  // solid/fluid drag coefficient
  double nu = 0.0;     // fluid viscosity coefficient
  double c1_s = 0.0;
  double c2_s = 0.0;
  double A_s = 0.0;
  double B_s = 0.0;

  /// Throws ConfigError naming the first field that violates positivity,
  /// or a negative effective modulus anywhere on [theta_min, theta_max].
  void validate(double theta_min, double theta_max) const;

  /// (mu_p0 - mu_p1 theta) / theta_s
  double mu_p_bar(double theta) const { return (mu_p0 - mu_p1 * theta) / theta_s; }
  /// (mu_G0 - mu_G1 theta) / theta_s
  double mu_G_bar(double theta) const { return (mu_G0 - mu_G1 * theta) / theta_s; }
};

/// Kinematic and density state at a material point. Built through
/// `from_kinematics` so that phi_s = 1/det F and rho = rho_s + rho_f hold.
struct MixtureState {
  DiagTensor3 F = DiagTensor3::identity();
  DiagTensor3 G = DiagTensor3::identity();
  double theta = 300.0;
  double phi_s = 1.0;
  double rho = 0.0;
  double rho_s = 0.0;
  double rho_f = 0.0;

  static MixtureState from_kinematics(const MaterialParams& params, const DiagTensor3& F,
                                      const DiagTensor3& G, double theta);

  double phi_f() const { return 1.0 - phi_s; }
  DiagTensor3 B_p() const { return left_cauchy_green(elastic_stretch(F, G)); }
  DiagTensor3 B_G() const { return left_cauchy_green(G); }
};

enum class MixingLimit {
  Strict,  // phi_s == 1 is a domain error
  Limit,   // use (1 - phi) ln(1 - phi) -> 0 at phi_s == 1
};

/// Specific Helmholtz potential (J/kg).
double helmholtz(const MaterialParams& params, const MixtureState& state,
                 MixingLimit mode = MixingLimit::Strict);

/// Specific entropy -d(psi)/d(theta) (J/(kg K)).
double entropy(const MaterialParams& params, const MixtureState& state,
               MixingLimit mode = MixingLimit::Strict);

/// Specific internal energy psi + theta * eta in closed form (J/kg).
/// The mixing contribution cancels identically, so phi_s = 1 is allowed.
double internal_energy(const MaterialParams& params, const MixtureState& state);

/// C_v = c1 theta + c2.
double heat_capacity(const MaterialParams& params, double theta);

/// Stress conjugate to the elastic stretch B_p(t). Throws std::domain_error
/// for phi_s >= 1 (the mixing pressure is singular there).
DiagTensor3 stress_Tp(const MaterialParams& params, const MixtureState& state);
/// Stress conjugate to B_G.
DiagTensor3 stress_TG(const MaterialParams& params, const MixtureState& state);

DiagTensor3 partial_stress_solid(const MaterialParams& params, const MixtureState& state,
                                 double lambda);
/// `fluid_stretching` is the fluid's symmetric velocity gradient D^f (1/s).
DiagTensor3 partial_stress_fluid(const MaterialParams& params, const MixtureState& state,
                                 double lambda, const DiagTensor3& fluid_stretching);

/// Scalar inputs to the 1D interaction force along z.
struct InteractionInputs {
  double lambda = 0.0;
  double dphi_s_dz = 0.0;
  double v_rel = 0.0;     // v_solid - v_fluid
  double dpsi_dz = 0.0;   // gradient of psi at fixed theta
};

/// Force density on the solid, m^s (N/m^3).
double interaction_force_1d(const MaterialParams& params, const MixtureState& state,
                            const InteractionInputs& in);
/// Force density on the fluid, -m^s.
double interaction_force_fluid_1d(const MaterialParams& params, const MixtureState& state,
                                  const InteractionInputs& in);

/// D_G solved from the evolution law of the natural configuration (1/s).
/// Throws std::domain_error when gamma <= 0.
DiagTensor3 natural_config_rate(const MaterialParams& params, const MixtureState& state);

/// gamma |D_G|^2 + alpha v_rel^2 + nu |D^f|^2.
double dissipation_rate(const MaterialParams& params, const DiagTensor3& D_G, double v_rel,
                        const DiagTensor3& fluid_stretching);

/// Incompressible standard-linear-solid reduction (no fluid).
namespace sls {

/// eta * D_G = 2 mu_p B_p - 2 mu_G B_G - (2/3)[mu_p tr B_p - mu_G tr B_G] I
DiagTensor3 evolution_rhs(const MaterialParams& params, double theta, const DiagTensor3& B_p,
                          const DiagTensor3& B_G);
/// T = p I + 2 mu_p B_p
DiagTensor3 stress(double p_lagrange, const MaterialParams& params, double theta,
                   const DiagTensor3& B_p);

}  // namespace sls

}  // namespace viscoswell::constitutive
