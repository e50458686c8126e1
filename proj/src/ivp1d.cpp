#include "viscoswell/ivp1d.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <stdexcept>

#include "viscoswell/errors.hpp"

namespace viscoswell::ivp {
namespace {

void require(bool ok, const char* field, const char* what) {
  if (!ok) throw ConfigError(field, what);
}

// Pieces shared by W and dW/dp. `inv` = 1/p, `log_term` = ln(1 - 1/p).
struct NodeTerms {
  double tzz;
  double psi;
};

inline NodeTerms node_terms(double p, double g, const NondimParams& np) {
  const double inv = 1.0 / p;
  const double log_term = std::log((p - 1.0) * inv);
  const double g2 = g * g;
  const double r2 = p * p / g2;
  const double s = 1.0 + (p - 1.0) / np.beta1;
  const double elastic = 3.0 * np.mu_p_star * r2 - np.mu_p_star + np.mu_G_star * (g2 - 1.0);
  const double mix = log_term + inv + np.chi * inv * inv;
  const double tzz = s * elastic + (p + np.beta1 - 1.0) * mix;
  const double psi = (np.mu_G_star * p * (g2 - 1.0) + np.mu_p_star * p * (r2 - 1.0)) / np.beta1 +
                     (p - 1.0) * log_term - np.chi * inv;
  return {tzz, psi};
}

}  // namespace

void NondimParams::validate() const {
  require(std::isfinite(beta1) && beta1 > 0.0, "beta1", "must be positive");
  require(std::isfinite(beta2) && beta2 > 0.0, "beta2", "must be positive");
  require(std::isfinite(chi), "chi", "must be finite");
  require(std::isfinite(mu_p_star) && mu_p_star >= 0.0, "mu_p_star", "must be non-negative");
  require(std::isfinite(mu_G_star) && mu_G_star >= 0.0, "mu_G_star", "must be non-negative");
  require(std::isfinite(gamma_star) && gamma_star > 0.0, "gamma_star", "must be positive");
}

NondimParams nondimensionalize(const constitutive::MaterialParams& params, double theta,
                               double length, double time) {
  const double mu = params.R * theta / params.V0;
  NondimParams np;
  np.beta1 = params.rho_R_s / params.rho_R_f;
  np.beta2 = length * length * params.V0 * params.alpha / (params.R * theta * time);
  np.chi = params.chi;
  np.mu_p_star = params.mu_p_bar(theta) / mu;
  np.mu_G_star = params.mu_G_bar(theta) / mu;
  np.gamma_star = params.gamma / (mu * time);
  return np;
}

void State1D::validate() const {
  require(p.size() >= 3, "N", "grid needs at least 3 nodes");
  require(g.size() == p.size(), "g", "size differs from p");
  for (std::size_t i = 0; i < p.size(); ++i) {
    require(std::isfinite(p[i]) && p[i] >= 1.0, "p", "nodal stretch must be finite and >= 1");
    require(std::isfinite(g[i]) && g[i] > 0.0, "g", "natural stretch must be positive");
  }
}

State1D State1D::dry(std::size_t n, double floor_eps) {
  return uniform(n, 1.0 + floor_eps, 1.0);
}

State1D State1D::uniform(std::size_t n, double p, double g, double t_star) {
  State1D s;
  s.t_star = t_star;
  s.p.assign(n, p);
  s.g.assign(n, g);
  return s;
}

void LoadSchedule::validate() const {
  require(!segments.empty(), "schedule", "needs at least one segment");
  double prev = 0.0;
  for (const auto& seg : segments) {
    require(std::isfinite(seg.t_end) && seg.t_end > prev, "schedule",
            "segment end times must be strictly increasing and positive");
    require(std::isfinite(seg.force) && seg.force >= 0.0, "schedule",
            "force must be finite and non-negative (compressive)");
    prev = seg.t_end;
  }
  require(std::isfinite(p_inf_star), "P_inf_star", "must be finite");
}

double LoadSchedule::force_at(double t) const {
  for (const auto& seg : segments) {
    if (t <= seg.t_end) return seg.force;
  }
  throw ConfigError("schedule", "time " + std::to_string(t) + " beyond load schedule horizon");
}

LoadSchedule LoadSchedule::constant(double force, double t_end, double p_inf) {
  return {{{t_end, force}}, p_inf};
}

double tzz_sf(double p, double g, const NondimParams& np) {
  if (!(p > 1.0)) throw std::domain_error("tzz_sf: p must exceed 1");
  if (!(g > 0.0)) throw std::domain_error("tzz_sf: g must be positive");
  return node_terms(p, g, np).tzz;
}

double psi_tilde(double p, double g, const NondimParams& np) {
  if (!(p >= 1.0)) throw std::domain_error("psi_tilde: p must be at least 1");
  if (!(g > 0.0)) throw std::domain_error("psi_tilde: g must be positive");
  if (p == 1.0) {
    // (1 - 1/p) ln(1 - 1/p) -> 0
    const double g2 = g * g;
    return (np.mu_G_star * (g2 - 1.0) + np.mu_p_star * (1.0 / g2 - 1.0)) / np.beta1 - np.chi;
  }
  return node_terms(p, g, np).psi;
}

double driving_potential(double p, double g, const NondimParams& np) {
  if (!(p > 1.0)) throw std::domain_error("driving_potential: p must exceed 1");
  const NodeTerms t = node_terms(p, g, np);
  return t.tzz + t.psi;
}

double driving_potential_dp(double p, double g, const NondimParams& np) {
  if (!(p > 1.0)) throw std::domain_error("driving_potential_dp: p must exceed 1");
  const double inv = 1.0 / p;
  const double log_term = std::log((p - 1.0) * inv);
  const double g2 = g * g;
  const double r2 = p * p / g2;
  const double s = 1.0 + (p - 1.0) / np.beta1;
  const double elastic = 3.0 * np.mu_p_star * r2 - np.mu_p_star + np.mu_G_star * (g2 - 1.0);
  const double mix = log_term + inv + np.chi * inv * inv;
  const double dmix = inv / (p - 1.0) - inv * inv - 2.0 * np.chi * inv * inv * inv;
  const double dtzz = elastic / np.beta1 + s * 6.0 * np.mu_p_star * p / g2 + mix +
                      (p + np.beta1 - 1.0) * dmix;
  const double dpsi =
      (np.mu_G_star * (g2 - 1.0) + np.mu_p_star * (3.0 * r2 - 1.0)) / np.beta1 + mix;
  return dtzz + dpsi;
}

double g_rate(double p, double g, const NondimParams& np) {
  const double ratio = p / g;
  return (2.0 * g / np.gamma_star) * (1.0 + (p - 1.0) / np.beta1) *
         (np.mu_p_star * ratio * ratio - np.mu_G_star * g * g);
}

double boundary_residual(double p_b, double g_b, double force, const NondimParams& np) {
  return tzz_sf(p_b, g_b, np) + force;
}

BoundaryRoot solve_boundary(double g_b, double force, const NondimParams& np,
                            const BoundarySearch& search) {
  auto f = [&](double p) { return boundary_residual(p, g_b, force, np); };

  // Scan log-spaced in (p - 1): the residual varies like ln(p - 1) near p = 1.
  const double lo = std::log(search.p_lo - 1.0);
  const double hi = std::log(search.p_hi - 1.0);
  const std::size_t m = std::max<std::size_t>(search.scan_points, 2);
  double a = search.p_lo;
  double fa = f(a);
  double bracket_lo = 0.0, bracket_hi = 0.0, f_lo = 0.0, f_hi = 0.0;
  std::size_t changes = 0;
  for (std::size_t k = 1; k < m; ++k) {
    const double b = (k + 1 == m) ? search.p_hi
                                  : 1.0 + std::exp(lo + (hi - lo) * static_cast<double>(k) /
                                                            static_cast<double>(m - 1));
    const double fb = f(b);
    if (!std::isfinite(fb)) throw NumericError("boundary residual is not finite");
    if ((fa < 0.0) != (fb < 0.0) || fb == 0.0) {
      if (changes == 0) {
        bracket_lo = a;
        bracket_hi = b;
        f_lo = fa;
        f_hi = fb;
      }
      ++changes;
    }
    a = b;
    fa = fb;
  }
  if (changes == 0) {
    throw BoundaryError("no sign change of the boundary residual in (" +
                        std::to_string(search.p_lo) + ", " + std::to_string(search.p_hi) +
                        ") for g_b = " + std::to_string(g_b) + ", F* = " + std::to_string(force));
  }

  double x0 = bracket_lo, x1 = bracket_hi, f0 = f_lo, f1 = f_hi;
  for (int it = 0; it < 200 && x1 - x0 > 4.0 * std::numeric_limits<double>::epsilon() * x1; ++it) {
    const double mid = 0.5 * (x0 + x1);
    const double fm = f(mid);
    if (fm == 0.0) {
      x0 = x1 = mid;
      f0 = f1 = 0.0;
      break;
    }
    if ((fm < 0.0) == (f0 < 0.0)) {
      x0 = mid;
      f0 = fm;
    } else {
      x1 = mid;
      f1 = fm;
    }
  }
  double x = std::abs(f0) < std::abs(f1) ? x0 : x1;
  double fx = std::abs(f0) < std::abs(f1) ? f0 : f1;
  // Secant polish, kept only while it stays in the bracket and improves.
  for (int it = 0; it < 8 && std::abs(fx) > search.residual_tol && f1 != f0; ++it) {
    const double xs = x1 - f1 * (x1 - x0) / (f1 - f0);
    if (!(xs >= std::min(x0, x1) && xs <= std::max(x0, x1))) break;
    const double fs = f(xs);
    if (!(std::abs(fs) < std::abs(fx))) break;
    x = xs;
    fx = fs;
    x0 = x1;
    f0 = f1;
    x1 = xs;
    f1 = fs;
  }
  return {x, fx, changes};
}

PdeOperator::PdeOperator(std::size_t n, const NondimParams& np, double floor_eps)
    : n_(n),
      np_(np),
      floor_(1.0 + floor_eps),
      dz_(Grid{n}.dz()),
      inv_g2_(n, 1.0),
      g_part_(n, 0.0),
      w_(n, 0.0),
      a_(n, 0.0) {
  if (n < 3) throw ConfigError("N", "grid needs at least 3 nodes");
}

void PdeOperator::set_natural_config(std::span<const double> g) {
  for (std::size_t i = 0; i < n_; ++i) {
    const double g2 = g[i] * g[i];
    inv_g2_[i] = 1.0 / g2;
    g_part_[i] = np_.mu_G_star * (g2 - 1.0);
  }
}

double PdeOperator::evaluate(std::span<const double> p_in, std::span<double> rhs) {
  const double b1 = np_.beta1;
  const double mp = np_.mu_p_star;
  const double chi = np_.chi;
  double dmax = 0.0;

  for (std::size_t i = 0; i < n_; ++i) {
    const double p = std::max(p_in[i], floor_);
    const double inv = 1.0 / p;
    const double log_term = std::log((p - 1.0) * inv);
    const double r2 = p * p * inv_g2_[i];
    const double s = 1.0 + (p - 1.0) / b1;
    const double elastic = 3.0 * mp * r2 - mp + g_part_[i];
    const double mix = log_term + inv + chi * inv * inv;
    const double tzz = s * elastic + (p + b1 - 1.0) * mix;
    const double psi = (p * g_part_[i] + mp * p * (r2 - 1.0)) / b1 + (p - 1.0) * log_term - chi * inv;
    w_[i] = tzz + psi;
    a_[i] = (1.0 - inv) * inv;

    // Local diffusivity (p - 1) A dW/dp.
    const double dmix = inv / (p - 1.0) - inv * inv - 2.0 * chi * inv * inv * inv;
    const double dw = elastic / b1 + s * 6.0 * mp * p * inv_g2_[i] + mix + (p + b1 - 1.0) * dmix +
                      (g_part_[i] + mp * (3.0 * r2 - 1.0)) / b1 + mix;
    dmax = std::max(dmax, (p - 1.0) * a_[i] * std::abs(dw));
  }

  const double inv_dz = 1.0 / dz_;
  const double inv_beta2 = 1.0 / np_.beta2;
  rhs[0] = 0.0;
  rhs[n_ - 1] = 0.0;
  for (std::size_t i = 1; i + 1 < n_; ++i) {
    const double p = std::max(p_in[i], floor_);
    const double inv = 1.0 / p;
    const double dp = (std::max(p_in[i + 1], floor_) - std::max(p_in[i - 1], floor_)) * (0.5 * inv_dz);
    const double dw = (w_[i + 1] - w_[i - 1]) * (0.5 * inv_dz);
    const double advective = inv * inv * (1.0 - inv) * dp * dw;
    const double a_plus = 0.5 * (a_[i] + a_[i + 1]);
    const double a_minus = 0.5 * (a_[i - 1] + a_[i]);
    const double q_plus = a_plus * (w_[i + 1] - w_[i]) * inv_dz;
    const double q_minus = a_minus * (w_[i] - w_[i - 1]) * inv_dz;
    const double value = (advective + (p - 1.0) * (q_plus - q_minus) * inv_dz) * inv_beta2;
    if (!std::isfinite(value)) {
      throw NumericError("non-finite p* rate at node " + std::to_string(i), i);
    }
    rhs[i] = value;

    // Secant diffusivity across the face to the right. At a wetting front W
    // jumps by the log singularity and this term dominates; weighting with
    // the larger (p - 1) also bounds the growth rate of the drier node.
    const double pr = std::max(p_in[i + 1], floor_);
    const double jump = pr - p;
    if (std::abs(jump) > 1e-12) {
      const double secant = std::abs((w_[i + 1] - w_[i]) / jump);
      dmax = std::max(dmax, std::max(p - 1.0, pr - 1.0) * a_plus * secant);
    }
  }
  {
    // Left boundary face.
    const double p0 = std::max(p_in[0], floor_);
    const double p1 = std::max(p_in[1], floor_);
    if (std::abs(p1 - p0) > 1e-12) {
      const double secant = std::abs((w_[1] - w_[0]) / (p1 - p0));
      dmax = std::max(dmax, std::max(p0 - 1.0, p1 - 1.0) * 0.5 * (a_[0] + a_[1]) * secant);
    }
  }
  return dmax;
}

std::vector<double> pde_rhs(const State1D& state, const NondimParams& np, double floor_eps) {
  PdeOperator op(state.size(), np, floor_eps);
  op.set_natural_config(state.g);
  std::vector<double> full(state.size());
  op.evaluate(state.p, full);
  return {full.begin() + 1, full.end() - 1};
}

std::vector<double> fluid_velocity(const State1D& state, const NondimParams& np,
                                   double floor_eps) {
  const std::size_t n = state.size();
  PdeOperator op(n, np, floor_eps);
  op.set_natural_config(state.g);
  std::vector<double> scratch(n);
  op.evaluate(state.p, scratch);
  const auto w = op.potential();
  const double inv_2dz = 0.5 / op.dz();
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    double dw;
    if (i == 0) {
      dw = (-(3.0 * w[0]) + 4.0 * w[1] - w[2]) * inv_2dz;
    } else if (i + 1 == n) {
      dw = (3.0 * w[n - 1] - 4.0 * w[n - 2] + w[n - 3]) * inv_2dz;
    } else {
      dw = (w[i + 1] - w[i - 1]) * inv_2dz;
    }
    const double p = std::max(state.p[i], 1.0 + floor_eps);
    v[i] = -(1.0 / np.beta2) * (1.0 - 1.0 / p) * (1.0 / p) * dw;
  }
  return v;
}

double mass_ratio(const State1D& state, const NondimParams& np) {
  const std::size_t n = state.size();
  const double dz = state.grid().dz();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double weight = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
    sum += weight * (state.p[i] + np.beta1 - 1.0);
  }
  return sum * dz / (2.0 * np.beta1);
}

double normalized_mass(double m_t, double m_0, double m_inf) {
  if (m_inf == m_0) throw std::domain_error("normalized_mass: m_inf equals m_0");
  return (m_t - m_0) / (m_inf - m_0);
}

}  // namespace viscoswell::ivp
