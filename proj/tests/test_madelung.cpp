#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "stlab/errors.hpp"
#include "stlab/gaussian.hpp"
#include "stlab/madelung.hpp"
#include "stlab/selftrap.hpp"

using namespace stlab;
using std::numbers::pi;

namespace {

const PhysParams unit{};

ComplexField plane_wave(const Grid& g, int mode) {
  const double k = 2.0 * pi * static_cast<double>(mode) / g.length();
  const double amp = 1.0 / std::sqrt(g.length());
  return ComplexField::sample(g, [&](double q) {
    return std::polar(amp, k * q);
  });
}

}  // namespace

TEST_CASE("flat density has zero quantum potential") {
  const Grid g(-4.0, 4.0, 128, GridMode::periodic);
  const RealField rho = RealField::sample(g, [&](double) { return 1.0 / g.length(); });
  const MaskedField U = quantum_potential(rho, unit);
  for (std::size_t i = 0; i < g.n(); ++i) {
    CHECK(U.mask[i] == 1);
    CHECK(std::abs(U.value[i]) < 1e-10);
  }
}

TEST_CASE("gaussian quantum potential matches the closed form") {
  const Grid g(-10.0, 10.0, 2001, GridMode::bounded);
  const GaussianSpec spec{1.0, unit};
  const RealField rho = gaussian_density(spec, 0.0, g);
  const MaskedField U = quantum_potential(rho, unit);
  double err = 0.0;
  for (std::size_t i = 0; i < g.n(); ++i) {
    const double q = g.point(i);
    if (std::abs(q) > 5.0 || !U.mask[i] || U.edge[i]) continue;
    err = std::max(err, std::abs(U.value[i] - gaussian_quantum_potential(spec, 0.0, q)));
  }
  CHECK(err < 1e-6);
  CHECK(gaussian_quantum_potential(spec, 2.0, 0.5) ==
        doctest::Approx(oracle::Ug_q05_t2).epsilon(1e-14));
}

TEST_CASE("density floor controls the mask monotonically") {
  const Grid g(-10.0, 10.0, 501, GridMode::bounded);
  const RealField rho = gaussian_density(GaussianSpec{1.0, unit}, 0.0, g);
  const MaskedField coarse = quantum_potential(rho, unit, 1e-6);
  const MaskedField fine = quantum_potential(rho, unit, 1e-10);
  for (std::size_t i = 0; i < g.n(); ++i) {
    if (coarse.mask[i]) CHECK(fine.mask[i] == 1);  // lower floor keeps more nodes
    CHECK(coarse.mask[i] == (rho[i] >= 1e-6 ? 1 : 0));
  }
}

TEST_CASE("unnormalized or hopeless densities are rejected") {
  const Grid g(-10.0, 10.0, 501, GridMode::bounded);
  RealField rho = gaussian_density(GaussianSpec{1.0, unit}, 0.0, g);
  for (auto& r : rho) r *= 2.0;
  CHECK_THROWS_AS(quantum_potential(rho, unit), ConfigError);

  // normalized but everywhere below the floor: possible only on a huge domain
  const Grid wide(-1e11, 1e11, 64, GridMode::bounded);
  const RealField flat = RealField::sample(wide, [&](double) { return 0.5e-11; });
  CHECK_THROWS_AS(quantum_potential(flat, unit), DataError);
}

TEST_CASE("plane wave velocity is uniform with zero strain") {
  const Grid g(0.0, 8.0, 256, GridMode::periodic);
  const ComplexField psi = plane_wave(g, 3);
  const VelocityFields vf = velocity_field(psi, unit);
  const double k = 2.0 * pi * 3.0 / g.length();
  for (std::size_t i = 0; i < g.n(); ++i) {
    CHECK(vf.mask[i] == 1);
    // fd4 phase-speed truncation ~ k^5 h^4 / 30
    CHECK(vf.v[i] == doctest::Approx(k).epsilon(1e-5));
    CHECK(std::abs(vf.theta[i]) < 1e-8);
  }
}

TEST_CASE("velocity field is gauge invariant") {
  const Grid g(-20.0, 20.0, 1024, GridMode::periodic);
  const ComplexField psi = gaussian_analytic(GaussianSpec{1.0, unit}, 1.0, g).psi;
  ComplexField shifted = psi;
  const std::complex<double> phase = std::polar(1.0, 0.8128);
  for (auto& z : shifted) z *= phase;
  const VelocityFields a = velocity_field(psi, unit);
  const VelocityFields b = velocity_field(shifted, unit);
  double err = 0.0;
  for (std::size_t i = 0; i < g.n(); ++i)
    if (a.mask[i] && b.mask[i]) err = std::max(err, std::abs(a.v[i] - b.v[i]));
  CHECK(err < 1e-12);
}

TEST_CASE("spreading packet velocity matches the analytic slope") {
  const Grid g(-20.0, 20.0, 4001, GridMode::bounded);
  const ComplexField psi = gaussian_analytic(GaussianSpec{1.0, unit}, 1.0, g).psi;
  const VelocityFields vf = velocity_field(psi, unit);
  const std::size_t i = static_cast<std::size_t>(std::llround((1.5 + 20.0) / g.dx()));
  REQUIRE(g.point(i) == doctest::Approx(1.5).epsilon(1e-12));
  REQUIRE(vf.mask[i] == 1);
  CHECK(std::abs(vf.v[i] - oracle::vg_q15_t1) < 1e-6);
}

TEST_CASE("quantum force points downhill") {
  const Grid g(-10.0, 10.0, 2001, GridMode::bounded);
  const GaussianSpec spec{1.0, unit};
  const MaskedField U = quantum_potential(gaussian_density(spec, 0.0, g), unit);
  const RealField f = quantum_force(U.value, U.mask);
  // closed form: U = -q^2/8 + 1/4 at t = 0, so force = q/4
  const std::size_t i = static_cast<std::size_t>(std::llround((1.5 + 10.0) / g.dx()));
  CHECK(std::abs(f[i] - 0.375) < 1e-5);
}

TEST_CASE("convexity minimum separates trapped from spreading") {
  const DimensionlessProfile prof = solve_dimensionless(1.0);
  const SelfTrapState st =
      rescale(prof, unit, Grid(-1.2, 1.2, 4097, GridMode::bounded));
  Mask well_resolved(st.grid.n(), 0);
  for (std::size_t i = 0; i < st.grid.n(); ++i)
    if (st.rho[i] > 1e-6) well_resolved[i] = 1;
  CHECK(convexity_min(st.U, well_resolved) > 0.0);

  const Grid g(-10.0, 10.0, 2001, GridMode::bounded);
  const GaussianSpec spec{1.0, unit};
  const MaskedField U = quantum_potential(gaussian_density(spec, 0.0, g), unit);
  CHECK(convexity_min(U.value, U.mask) < 0.0);
}

TEST_CASE("convexity needs a minimal run of nodes") {
  const Grid g(-1.0, 1.0, 64, GridMode::bounded);
  const RealField f = RealField::sample(g, [](double q) { return q * q; });
  Mask sparse(g.n(), 0);
  sparse[10] = sparse[11] = sparse[12] = 1;
  CHECK_THROWS_AS(convexity_min(f, sparse), ConfigError);
}

TEST_CASE("caustic bound applies only to initial compression") {
  CHECK(caustic_bound(-0.5).value() == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(caustic_bound(-4.0).value() == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(!caustic_bound(0.0).has_value());
  CHECK(!caustic_bound(0.3).has_value());
}

TEST_CASE("analyze bundles consistent fields") {
  const Grid g(-20.0, 20.0, 2048, GridMode::periodic);
  const ComplexField psi = gaussian_analytic(GaussianSpec{1.0, unit}, 0.5, g).psi;
  const MadelungFields mf = analyze(psi, 0.5, unit);
  CHECK(mf.t == 0.5);
  for (std::size_t i = 0; i < g.n(); ++i) {
    CHECK(mf.rho[i] == doctest::Approx(std::norm(psi[i])).epsilon(1e-14));
    if (mf.mask_u[i])
      CHECK(mf.amplitude[i] == doctest::Approx(std::sqrt(mf.rho[i])).epsilon(1e-14));
  }
  // the spreading packet is nowhere convex once edges are excluded
  CHECK(convexity_min(mf.U, mf.mask_u) < 0.0);
}
