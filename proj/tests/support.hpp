#pragma once

#include <cmath>
#include <random>

#include "viscoswell/constitutive.hpp"
#include "viscoswell/ivp1d.hpp"

namespace support {

// Independent oracle values from a scalar Brent solve of the wall equation
// outside this code base (scipy.optimize.brentq, xtol = rtol = 1e-15).
inline constexpr double kDmsoPeq = 1.4373220509594968;     // beta1 1.3, chi 0.425, g = sqrt(p)
inline constexpr double kNmpPeq = 1.3787982759990953;      // beta1 1.4, chi 0.6, g = sqrt(p)
inline constexpr double kDmsoWallAtG1 = 1.3679909882864814;  // same as DMSO with g = 1
inline constexpr double kDmsoPeqLoaded = 1.1403284458173009;  // DMSO with F* = 1

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

inline double max_rel(const viscoswell::DiagTensor3& a, const viscoswell::DiagTensor3& b) {
  const double scale = std::max({std::abs(b.d1), std::abs(b.d2), std::abs(b.d3), 1e-300});
  return std::max({std::abs(a.d1 - b.d1), std::abs(a.d2 - b.d2), std::abs(a.d3 - b.d3)}) / scale;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Admissible dimensional parameters on a polymer/solvent scale.
inline viscoswell::constitutive::MaterialParams random_params(std::mt19937_64& rng) {
  viscoswell::constitutive::MaterialParams p;
  p.theta_s = uniform(rng, 280.0, 320.0);
  p.mu_p0 = uniform(rng, 1e5, 1e6);
  p.mu_p1 = uniform(rng, 0.0, 100.0);
  p.mu_G0 = uniform(rng, 1e5, 1e6);
  p.mu_G1 = uniform(rng, 0.0, 100.0);
  p.V0 = uniform(rng, 5e-5, 2e-4);
  p.chi = uniform(rng, 0.0, 1.0);
  p.rho_R_s = uniform(rng, 1000.0, 1500.0);
  p.rho_R_f = uniform(rng, 800.0, 1200.0);
  p.gamma = uniform(rng, 1e3, 1e6);
  p.alpha = uniform(rng, 0.0, 1e3);
  p.nu = uniform(rng, 0.0, 10.0);
  p.c1_s = uniform(rng, 0.0, 0.01);
  p.c2_s = uniform(rng, 1000.0, 2000.0);
  p.A_s = uniform(rng, -100.0, 100.0);
  p.B_s = uniform(rng, -10.0, 10.0);
  return p;
}

/// Swollen diagonal state: det F in (1, ~4), arbitrary positive G.
inline viscoswell::constitutive::MixtureState random_state(
    const viscoswell::constitutive::MaterialParams& params, std::mt19937_64& rng) {
  const viscoswell::DiagTensor3 F{uniform(rng, 1.0, 1.4), uniform(rng, 1.0, 1.4),
                                  uniform(rng, 1.05, 2.0)};
  const viscoswell::DiagTensor3 G{uniform(rng, 0.8, 1.3), uniform(rng, 0.8, 1.3),
                                  uniform(rng, 0.8, 1.5)};
  return viscoswell::constitutive::MixtureState::from_kinematics(params, F, G,
                                                                 uniform(rng, 280.0, 340.0));
}

// Test-side re-coding of the nondimensional wall stress and free energy,
// in extended precision so that 1 - 1/p keeps its digits near p = 1.
inline double tzz_ref(double pd, double gd, const viscoswell::ivp::NondimParams& np) {
  const long double p = pd, g = gd, b1 = np.beta1, mp = np.mu_p_star, mg = np.mu_G_star;
  const long double s = 1.0L + (p - 1.0L) / b1;
  const long double bracket =
      2.0L * mp * (p / g) * (p / g) + mp * (p * p / (g * g) - 1.0L) + mg * (g * g - 1.0L);
  const long double mixing = (1.0L + (b1 - 1.0L) / p) * p *
                             (std::log(1.0L - 1.0L / p) + 1.0L / p + np.chi / (p * p));
  return static_cast<double>(s * bracket + mixing);
}

inline double psi_ref(double pd, double gd, const viscoswell::ivp::NondimParams& np) {
  const long double p = pd, g = gd, b1 = np.beta1;
  const long double x = 1.0L - 1.0L / p;
  const long double xlogx = x > 0.0L ? x * std::log(x) : 0.0L;
  return static_cast<double>(np.mu_G_star * p / b1 * (g * g - 1.0L) +
                             p * np.mu_p_star / b1 * (p * p / (g * g) - 1.0L) +
                             p * (xlogx - np.chi / (p * p)));
}

}  // namespace support
