#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>

#include "support.hpp"
#include "viscoswell/errors.hpp"
#include "viscoswell/ivp1d.hpp"

namespace ivp = viscoswell::ivp;

namespace {

ivp::NondimParams dmso() { return {}; }

// Fourth-order central difference of a smooth scalar function.
double d1(const std::function<double(double)>& f, double x, double h) {
  return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h);
}

// Continuum right-hand side of the transport equation on p(Z), g = 1,
// differentiated with high-order stencils of the test-side potential.
double continuum_rhs(const std::function<double(double)>& p, double z,
                     const ivp::NondimParams& np) {
  const double h = 1e-3;
  auto w = [&](double x) { return support::tzz_ref(p(x), 1.0, np) + support::psi_ref(p(x), 1.0, np); };
  auto flux = [&](double x) {
    const double px = p(x);
    return (1.0 - 1.0 / px) / px * d1(w, x, h);
  };
  const double pz = p(z);
  const double adv = (1.0 / (pz * pz)) * (1.0 - 1.0 / pz) * d1(p, z, h) * d1(w, z, h);
  return (adv + (pz - 1.0) * d1(flux, z, h)) / np.beta2;
}

// Samples even fields and mirrors them so the nodal data is exactly symmetric.
ivp::State1D sample(std::size_t n, const std::function<double(double)>& p,
                    const std::function<double(double)>& g) {
  auto s = ivp::State1D::uniform(n, 1.0, 1.0);
  const ivp::Grid grid{n};
  for (std::size_t i = 0; i <= n / 2; ++i) {
    s.p[i] = s.p[n - 1 - i] = p(grid.z(i));
    s.g[i] = s.g[n - 1 - i] = g(grid.z(i));
  }
  return s;
}

double cosine_field(double z) { return 1.5 + 0.1 * std::cos(std::numbers::pi * z / 2.0); }

}  // namespace

TEST_SUITE("ivp1d") {

TEST_CASE("parameter validation names the field") {
  CHECK_NOTHROW(dmso().validate());
  struct Case {
    const char* field;
    void (*mutate)(ivp::NondimParams&);
  };
  const Case cases[] = {
      {"beta1", [](ivp::NondimParams& p) { p.beta1 = 0.0; }},
      {"beta2", [](ivp::NondimParams& p) { p.beta2 = -1.0; }},
      {"chi", [](ivp::NondimParams& p) { p.chi = std::nan(""); }},
      {"mu_p_star", [](ivp::NondimParams& p) { p.mu_p_star = -0.1; }},
      {"mu_G_star", [](ivp::NondimParams& p) { p.mu_G_star = -0.1; }},
      {"gamma_star", [](ivp::NondimParams& p) { p.gamma_star = 0.0; }},
  };
  for (const auto& c : cases) {
    auto p = dmso();
    c.mutate(p);
    try {
      p.validate();
      FAIL("expected ConfigError for " << c.field);
    } catch (const viscoswell::ConfigError& e) {
      CHECK(e.field() == c.field);
    }
  }
}

TEST_CASE("nondimensional groups") {
  viscoswell::constitutive::MaterialParams m;
  m.rho_R_s = 1300.0;
  m.rho_R_f = 1000.0;
  m.V0 = 7.1e-5;
  m.alpha = 2e13;
  m.gamma = 5e9;
  m.mu_p0 = 3.5e6;
  m.mu_G0 = 3.5e6;
  m.chi = 0.425;
  const double th = 300.0, L = 5e-5, T = 6.3e5;
  const auto np = ivp::nondimensionalize(m, th, L, T);
  const double mu = m.R * th / m.V0;
  CHECK(np.beta1 == doctest::Approx(1.3));
  CHECK(np.beta2 == doctest::Approx(L * L * m.V0 * m.alpha / (m.R * th * T)));
  CHECK(np.mu_p_star == doctest::Approx(m.mu_p0 / m.theta_s / mu));
  CHECK(np.gamma_star == doctest::Approx(m.gamma / (mu * T)));
  CHECK(np.chi == 0.425);
}

TEST_CASE("grid and state") {
  const ivp::Grid g{5};
  CHECK(g.dz() == 0.5);
  CHECK(g.z(0) == -1.0);
  CHECK(g.z(2) == 0.0);
  CHECK(g.z(4) == 1.0);
  CHECK(g.has_center_node());
  CHECK_FALSE(ivp::Grid{4}.has_center_node());

  const auto dry = ivp::State1D::dry(11);
  CHECK(dry.p[3] == 1.0 + 1e-10);
  CHECK(dry.g[3] == 1.0);
  CHECK_NOTHROW(dry.validate());
  auto bad = dry;
  bad.p[2] = 0.99;
  CHECK_THROWS_AS(bad.validate(), viscoswell::ConfigError);
  bad = dry;
  bad.g[2] = 0.0;
  CHECK_THROWS_AS(bad.validate(), viscoswell::ConfigError);
  bad = dry;
  bad.g.pop_back();
  CHECK_THROWS_AS(bad.validate(), viscoswell::ConfigError);
  CHECK_THROWS_AS(ivp::State1D::uniform(2, 1.5, 1.0).validate(), viscoswell::ConfigError);
}

TEST_CASE("load schedule") {
  const ivp::LoadSchedule s{{{0.5, 0.0}, {1.0, 1.0}, {1.5, 0.0}}, 0.0};
  CHECK_NOTHROW(s.validate());
  CHECK(s.horizon() == 1.5);
  CHECK(s.force_at(0.0) == 0.0);
  CHECK(s.force_at(0.5) == 0.0);
  CHECK(s.force_at(0.5000001) == 1.0);
  CHECK(s.force_at(1.0) == 1.0);
  CHECK(s.force_at(1.2) == 0.0);
  CHECK_THROWS_AS(s.force_at(1.6), viscoswell::ConfigError);

  CHECK_THROWS_AS((ivp::LoadSchedule{{}, 0.0}.validate()), viscoswell::ConfigError);
  CHECK_THROWS_AS((ivp::LoadSchedule{{{1.0, 0.0}, {1.0, 1.0}}, 0.0}.validate()),
                  viscoswell::ConfigError);
  CHECK_THROWS_AS((ivp::LoadSchedule{{{1.0, -1.0}}, 0.0}.validate()), viscoswell::ConfigError);
  CHECK(ivp::LoadSchedule::constant(2.0, 3.0, 0.5) == ivp::LoadSchedule{{{3.0, 2.0}}, 0.5});
}

TEST_CASE("wall stress agrees with an independent coding") {
  std::mt19937_64 rng(101);
  for (int k = 0; k < 200; ++k) {
    ivp::NondimParams np{support::uniform(rng, 0.5, 3.0), 0.018, support::uniform(rng, 0.0, 1.5),
                         support::uniform(rng, 0.0, 1.0), support::uniform(rng, 0.0, 1.0), 20.0};
    const double p = 1.0 + std::exp(support::uniform(rng, -15.0, 3.0));
    const double g = support::uniform(rng, 0.5, 3.0);
    const double ref = support::tzz_ref(p, g, np);
    CHECK(ivp::tzz_sf(p, g, np) == doctest::Approx(ref).epsilon(1e-12).scale(1.0));
    CHECK(ivp::psi_tilde(p, g, np) ==
          doctest::Approx(support::psi_ref(p, g, np)).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("wall stress special values") {
  const auto np = dmso();
  CHECK(ivp::tzz_sf(1.0 + 1e-8, 1.0, np) < -10.0);
  CHECK_THROWS_AS(ivp::tzz_sf(1.0, 1.0, np), std::domain_error);
  CHECK_THROWS_AS(ivp::tzz_sf(2.0, 0.0, np), std::domain_error);

  // p = g^2 with equal moduli: the elastic bracket is 2 mu p + 2 mu (p - 1)
  const double p = 2.0, g = std::sqrt(2.0), mu = np.mu_p_star;
  const double s = 1.0 + (p - 1.0) / np.beta1;
  const double mixing = (p + np.beta1 - 1.0) * (std::log(1.0 - 1.0 / p) + 1.0 / p + np.chi / (p * p));
  CHECK(ivp::tzz_sf(p, g, np) ==
        doctest::Approx(s * (2.0 * mu * p + 2.0 * mu * (p - 1.0)) + mixing).epsilon(1e-14));

  const double peq = support::kDmsoPeq;
  CHECK(std::abs(ivp::tzz_sf(peq, std::sqrt(peq), np)) < 1e-12);
}

TEST_CASE("free energy special values") {
  auto np = dmso();
  CHECK(ivp::psi_tilde(1.0, 1.0, np) == doctest::Approx(-0.425).epsilon(1e-15));
  np.chi = 0.0;
  CHECK(ivp::psi_tilde(1.0, 1.0, np) == 0.0);
  const double p = 3.0;
  const double expected = np.mu_p_star / np.beta1 * p * (p * p - 1.0) +
                          p * (1.0 - 1.0 / p) * std::log(1.0 - 1.0 / p);
  CHECK(ivp::psi_tilde(p, 1.0, np) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(ivp::psi_tilde(1.0 + 1e-12, 1.3, np) ==
        doctest::Approx(ivp::psi_tilde(1.0, 1.3, np)).epsilon(1e-9));
  CHECK_THROWS_AS(ivp::psi_tilde(0.999, 1.0, np), std::domain_error);
}

TEST_CASE("potential derivative matches finite differences") {
  std::mt19937_64 rng(55);
  for (int k = 0; k < 100; ++k) {
    ivp::NondimParams np{support::uniform(rng, 0.8, 2.0), 0.018, support::uniform(rng, 0.0, 1.0),
                         support::uniform(rng, 0.0, 0.5), support::uniform(rng, 0.0, 0.5), 20.0};
    const double p = 1.0 + std::exp(support::uniform(rng, -6.0, 2.0));
    const double g = support::uniform(rng, 0.7, 2.0);
    const double h = 1e-4 * (p - 1.0);
    auto w = [&](double x) { return ivp::driving_potential(x, g, np); };
    const double fd = d1(w, p, h);
    CHECK(ivp::driving_potential_dp(p, g, np) == doctest::Approx(fd).epsilon(1e-7));
    CHECK(ivp::driving_potential(p, g, np) ==
          doctest::Approx(ivp::tzz_sf(p, g, np) + ivp::psi_tilde(p, g, np)).epsilon(1e-15));
  }
}

TEST_CASE("natural configuration rate") {
  auto np = dmso();
  CHECK(ivp::g_rate(4.0, 2.0, np) == 0.0);
  CHECK(ivp::g_rate(1.0, 1.0, np) == 0.0);
  np.mu_G_star = 0.0;
  const double p = 2.0, g = 1.0;
  const double expected = (2.0 / np.gamma_star) * (1.0 + (p - 1.0) / np.beta1) * np.mu_p_star * 4.0;
  CHECK(ivp::g_rate(p, g, np) == doctest::Approx(expected).epsilon(1e-15));
  CHECK(ivp::g_rate(p, g, np) > 0.0);
}

TEST_CASE("boundary root at g = 1 and at the free-swell fixed point") {
  const auto np = dmso();
  const auto r = ivp::solve_boundary(1.0, 0.0, np);
  CHECK(r.sign_changes == 1);
  CHECK(support::rel(r.p, support::kDmsoWallAtG1) <= 1e-13);
  CHECK(std::abs(ivp::boundary_residual(r.p, 1.0, 0.0, np)) <= 1e-10);

  const double g = std::sqrt(support::kDmsoPeq);
  const auto eq = ivp::solve_boundary(g, 0.0, np);
  CHECK(support::rel(eq.p, support::kDmsoPeq) <= 1e-9);
}

TEST_CASE("compressive force pushes the wall root toward one") {
  const auto np = dmso();
  double prev = ivp::solve_boundary(1.0, 0.0, np).p;
  for (double f : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0}) {
    const double p = ivp::solve_boundary(1.0, f, np).p;
    CHECK(p < prev);
    CHECK(p > 1.0);
    prev = p;
  }
  CHECK(prev - 1.0 < 1e-6);
}

TEST_CASE("wall stress is increasing above the swelling threshold") {
  const auto np = dmso();
  double prev = ivp::tzz_sf(1.0 + 1e-9, 1.0, np);
  for (double p = 1.01; p < 10.0; p += 0.01) {
    const double t = ivp::tzz_sf(p, 1.0, np);
    CHECK(t > prev);
    prev = t;
  }
}

TEST_CASE("boundary failures and multiple roots") {
  const auto np = dmso();
  CHECK_THROWS_AS(ivp::solve_boundary(1.0, -1e6, np), viscoswell::BoundaryError);

  // Strong mixing with very soft solid: the wall stress rises, falls and rises again.
  ivp::NondimParams soft{1.3, 0.018, 3.0, 1e-4, 1e-4, 20.0};
  const auto r = ivp::solve_boundary(1.0, -0.5, soft);
  CHECK(r.sign_changes > 1);
  CHECK(std::abs(r.residual) <= 1e-10);
  // no root below the reported one
  const double f_lo = ivp::boundary_residual(1.0 + 1e-9, 1.0, -0.5, soft);
  for (double p = 1.0 + 1e-9; p < r.p * (1.0 - 1e-9); p += (r.p - 1.0) / 1000.0) {
    CHECK((ivp::boundary_residual(p, 1.0, -0.5, soft) < 0.0) == (f_lo < 0.0));
  }
}

TEST_CASE("transport operator vanishes on uniform states") {
  const auto np = dmso();
  for (double p : {1.0 + 1e-10, 1.2, 1.437, 3.0}) {
    const auto rhs = ivp::pde_rhs(ivp::State1D::uniform(41, p, 1.1), np);
    CHECK(rhs.size() == 39);
    for (double v : rhs) CHECK(v == 0.0);
  }
}

TEST_CASE("transport operator is reflection symmetric") {
  const auto np = dmso();
  std::mt19937_64 rng(77);
  const std::size_t n = 61;
  ivp::State1D s = ivp::State1D::uniform(n, 1.0, 1.0);
  for (std::size_t i = 0; i <= n / 2; ++i) {
    s.p[i] = s.p[n - 1 - i] = 1.0 + support::uniform(rng, 0.0, 0.8);
    s.g[i] = s.g[n - 1 - i] = support::uniform(rng, 0.9, 1.3);
  }
  const auto rhs = ivp::pde_rhs(s, np);
  for (std::size_t i = 0; i < rhs.size(); ++i) CHECK(rhs[i] == rhs[rhs.size() - 1 - i]);
}

TEST_CASE("transport operator is finite at degenerate nodes") {
  const auto np = dmso();
  auto s = ivp::State1D::uniform(21, 1.0, 1.0);
  s.p.front() = s.p.back() = support::kDmsoWallAtG1;
  s.p[5] = 1.0;
  s.p[10] = 1.2;
  const auto rhs = ivp::pde_rhs(s, np);
  for (double v : rhs) CHECK(std::isfinite(v));
}

TEST_CASE("transport operator reports the failing node") {
  const auto np = dmso();
  auto s = ivp::State1D::uniform(21, 1.3, 1.0);
  s.p[7] = std::nan("");
  try {
    ivp::pde_rhs(s, np);
    FAIL("expected NumericError");
  } catch (const viscoswell::NumericError& e) {
    CHECK(e.node() >= 6);
    CHECK(e.node() <= 8);
  }
}

TEST_CASE("transport operator converges to the continuum operator") {
  const auto np = dmso();
  auto one = [](double) { return 1.0; };
  double prev_err = 0.0;
  for (std::size_t n : {51, 101, 201, 401}) {
    const auto s = sample(n, cosine_field, one);
    const auto rhs = ivp::pde_rhs(s, np);
    const ivp::Grid grid{n};
    double err = 0.0, scale = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double ref = continuum_rhs(cosine_field, grid.z(i), np);
      err = std::max(err, std::abs(rhs[i - 1] - ref));
      scale = std::max(scale, std::abs(ref));
    }
    CHECK(err / scale < 1e-2);
    if (prev_err > 0.0) {
      const double ratio = prev_err / err;
      CHECK(ratio > 3.5);
      CHECK(ratio < 4.5);
    }
    prev_err = err;
  }
}

TEST_CASE("a local bump diffuses toward its neighbours") {
  const auto np = dmso();
  auto s = ivp::State1D::uniform(201, 1.3, 1.0);
  s.p[100] = 1.35;
  const auto rhs = ivp::pde_rhs(s, np);
  CHECK(rhs[99] < 0.0);   // node 100
  CHECK(rhs[98] > 0.0);   // node 99
  CHECK(rhs[100] > 0.0);  // node 101
  CHECK(rhs[98] == doctest::Approx(rhs[100]).epsilon(1e-12));
}

TEST_CASE("fluid velocity") {
  const auto np = dmso();
  for (double v : ivp::fluid_velocity(ivp::State1D::uniform(31, 1.4, 1.2), np)) CHECK(v == 0.0);

  auto g_field = [](double z) { return 1.0 + 0.05 * z * z; };
  const auto s = sample(101, cosine_field, g_field);
  const auto v = ivp::fluid_velocity(s, np);
  for (std::size_t i = 0; i < v.size(); ++i) CHECK(v[i] == -v[v.size() - 1 - i]);
  // the centre is wetter, so fluid leaves through both walls
  CHECK(v.front() < 0.0);
  CHECK(v.back() > 0.0);
}

TEST_CASE("transport is consistent with fluid continuity") {
  const auto np = dmso();
  auto one = [](double) { return 1.0; };
  double prev = 0.0;
  for (std::size_t n : {101, 201, 401}) {
    const auto s = sample(n, cosine_field, one);
    const auto rhs = ivp::pde_rhs(s, np);
    const auto v = ivp::fluid_velocity(s, np);
    const double dz = s.grid().dz();
    double err = 0.0, scale = 0.0;
    // the nodes next to the walls see the one-sided wall velocity
    for (std::size_t i = 2; i + 2 < n; ++i) {
      const double pz = (s.p[i + 1] - s.p[i - 1]) / (2 * dz);
      const double vz = (v[i + 1] - v[i - 1]) / (2 * dz);
      const double cont = -(v[i] / s.p[i]) * pz - (s.p[i] - 1.0) * vz;
      err = std::max(err, std::abs(rhs[i - 1] - cont));
      scale = std::max(scale, std::abs(rhs[i - 1]));
    }
    CHECK(err / scale < 5e-2);
    if (prev > 0.0) CHECK(prev / err > 3.0);
    prev = err;
  }
}

TEST_CASE("mass ratio") {
  const auto np = dmso();
  CHECK(ivp::mass_ratio(ivp::State1D::uniform(11, 1.0, 1.0), np) ==
        doctest::Approx(1.0).epsilon(1e-15));
  CHECK(ivp::mass_ratio(ivp::State1D::uniform(11, 2.0, 1.0), np) ==
        doctest::Approx(2.3 / 1.3).epsilon(1e-15));

  std::mt19937_64 rng(13);
  auto s = ivp::State1D::uniform(21, 1.0, 1.0);
  for (auto& p : s.p) p = 1.0 + support::uniform(rng, 0.0, 1.0);
  const double base = ivp::mass_ratio(s, np);
  for (std::size_t i = 0; i < s.size(); ++i) {
    auto t = s;
    t.p[i] += 0.01;
    CHECK(ivp::mass_ratio(t, np) > base);
  }
}

TEST_CASE("normalized mass") {
  CHECK(ivp::normalized_mass(1.0, 1.0, 1.3) == 0.0);
  CHECK(ivp::normalized_mass(1.3, 1.0, 1.3) == 1.0);
  CHECK(ivp::normalized_mass(1.15, 1.0, 1.3) == doctest::Approx(0.5));
  CHECK_THROWS_AS(ivp::normalized_mass(1.0, 1.2, 1.2), std::domain_error);
}

}
