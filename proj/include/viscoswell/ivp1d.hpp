#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "viscoswell/constitutive.hpp"

namespace viscoswell::ivp {

/// Dimensionless groups of the 1D swelling problem.
struct NondimParams {
  double beta1 = 1.3;        // rho_R_s / rho_R_f
  double beta2 = 0.018;      // L^2 V0 alpha / (R theta T)
  double chi = 0.425;        // Flory-Huggins mixing parameter
  double mu_p_star = 0.1;    // mu_p / (R theta / V0)
  double mu_G_star = 0.1;    // mu_G / (R theta / V0)
  double gamma_star = 20.0;  // gamma / (mu T)

  /// Throws ConfigError naming the offending field.
  void validate() const;

  friend bool operator==(const NondimParams&, const NondimParams&) = default;
};

/// Scales dimensional constants at temperature `theta` with characteristic
/// half-thickness `length` (m) and time `time` (s).
NondimParams nondimensionalize(const constitutive::MaterialParams& params, double theta,
                               double length, double time);

/// Uniform node set on Z* in [-1, 1].
struct Grid {
  std::size_t n = 0;

  double dz() const { return 2.0 / static_cast<double>(n - 1); }
  double z(std::size_t i) const { return -1.0 + static_cast<double>(i) * dz(); }
  /// Index of Z* = 0, which exists only for odd n.
  bool has_center_node() const { return n % 2 == 1; }
};

/// Nodal p* and g* on the reference grid at time t*.
struct State1D {
  double t_star = 0.0;
  std::vector<double> p;
  std::vector<double> g;

  std::size_t size() const { return p.size(); }
  Grid grid() const { return {p.size()}; }

  /// Throws ConfigError on size mismatch, N < 3, p < 1 or g <= 0.
  void validate() const;

  /// Dry, undeformed solid: p = 1 + floor, g = 1.
  static State1D dry(std::size_t n, double floor_eps = 1e-10);
  static State1D uniform(std::size_t n, double p, double g, double t_star = 0.0);
};

struct LoadSegment {
  double t_end = 0.0;  // segment covers (previous t_end, t_end]
  double force = 0.0;  // F*, compressive when positive

  friend bool operator==(const LoadSegment&, const LoadSegment&) = default;
};

/// Piecewise-constant applied force and far-field fluid pressure.
struct LoadSchedule {
  std::vector<LoadSegment> segments;
  double p_inf_star = 0.0;

  void validate() const;
  double horizon() const { return segments.empty() ? 0.0 : segments.back().t_end; }
  /// F* on the segment containing t. Throws ConfigError beyond the horizon.
  double force_at(double t) const;

  static LoadSchedule constant(double force, double t_end, double p_inf = 0.0);

  friend bool operator==(const LoadSchedule&, const LoadSchedule&) = default;
};

/// Nondimensional mixture stress without the multiplier, T_zz^{sf*}.
/// Throws std::domain_error for p <= 1 or g <= 0.
double tzz_sf(double p, double g, const NondimParams& np);

/// psi~*: finite at p = 1 where the mixing bracket tends to -chi.
/// Throws std::domain_error for p < 1 or g <= 0.
double psi_tilde(double p, double g, const NondimParams& np);

/// W = T_zz^{sf*} + psi~*, the potential whose gradient drives the fluid.
double driving_potential(double p, double g, const NondimParams& np);
/// dW/dp at fixed g.
double driving_potential_dp(double p, double g, const NondimParams& np);

/// dg*/dt* from the natural-configuration evolution law.
double g_rate(double p, double g, const NondimParams& np);

/// T_zz^{sf*}(p_b, g_b) + F*. Its root in p_b is the wall value of p.
double boundary_residual(double p_b, double g_b, double force, const NondimParams& np);

struct BoundarySearch {
  double p_lo = 1.0 + 1e-9;
  double p_hi = 50.0;
  std::size_t scan_points = 96;
  double residual_tol = 1e-12;
};

struct BoundaryRoot {
  double p = 0.0;
  double residual = 0.0;
  std::size_t sign_changes = 0;  // > 1 means the smallest root was taken
};

/// Smallest root of the boundary residual in (p_lo, p_hi): scan for sign
/// changes, bisect the first bracket, polish with secant steps.
/// Throws BoundaryError when no sign change exists.
BoundaryRoot solve_boundary(double g_b, double force, const NondimParams& np,
                            const BoundarySearch& search = {});

/// Second-order finite-difference discretisation of the p* transport
/// equation on a uniform grid, with g* frozen. Reused across sub-steps to
/// avoid allocation.
class PdeOperator {
 public:
  PdeOperator(std::size_t n, const NondimParams& np, double floor_eps = 1e-10);

  /// Caches the g*-dependent coefficients. Must be called before evaluate().
  void set_natural_config(std::span<const double> g);

  /// Fills rhs[i] = dp*/dt* at interior nodes; rhs[0] = rhs[n-1] = 0.
  /// Returns the largest diffusivity estimate (before division by beta2),
  /// used to size explicit sub-steps. Throws NumericError on a non-finite
  /// value, carrying the node index.
  double evaluate(std::span<const double> p, std::span<double> rhs);

  /// W at the nodes from the most recent evaluate().
  std::span<const double> potential() const { return w_; }

  std::size_t size() const { return n_; }
  double dz() const { return dz_; }

 private:
  std::size_t n_;
  NondimParams np_;
  double floor_;
  double dz_;
  std::vector<double> inv_g2_;   // 1/g^2
  std::vector<double> g_part_;   // mu_G (g^2 - 1)
  std::vector<double> w_;
  std::vector<double> a_;        // (1 - 1/p)/p
};

/// dp*/dt* at the N-2 interior nodes of `state`.
std::vector<double> pde_rhs(const State1D& state, const NondimParams& np,
                            double floor_eps = 1e-10);

/// Fluid velocity v* at every node (one-sided differences at the walls).
std::vector<double> fluid_velocity(const State1D& state, const NondimParams& np,
                                   double floor_eps = 1e-10);

/// m/m0 = (1/(2 beta1)) * integral of (p* + beta1 - 1) dZ*, trapezoid rule.
double mass_ratio(const State1D& state, const NondimParams& np);

/// (m_t - m_0)/(m_inf - m_0). Throws std::domain_error when m_inf == m_0.
double normalized_mass(double m_t, double m_0, double m_inf);

}  // namespace viscoswell::ivp
