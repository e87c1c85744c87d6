#include "stefan/error.hpp"
#include "stefan/spectral.hpp"
#include "stefan/thermo.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace stefan;

namespace {

SpectralConfig fixture(double u) {
  return SpectralConfig::from_equilibrium(FreeEnergyModel::equal_heat_capacity(1, 0, 0, 1, 1), 2, 1.0, u, 3.0);
}

double di(int k, double x) { return 0.5 * (std::cyl_bessel_i(std::abs(k - 1), x) + std::cyl_bessel_i(k + 1, x)); }
double dk(int k, double x) {
  return -0.5 * (std::cyl_bessel_k(std::abs(k - 1), x) + std::cyl_bessel_k(k + 1, x));
}

}  // namespace

TEST_CASE("equilibrium data") {
  const auto c = fixture(1.5);
  CHECK(c.inner_radius == doctest::Approx(2.0));
  CHECK(c.latent == doctest::Approx(1.5));
  CHECK(c.zeta() == doctest::Approx(0.375));
  CHECK(fixture(2.0).zeta() == doctest::Approx(2.25));
  CHECK(c.multiplicity(0) == 1);
  CHECK(c.multiplicity(3) == 2);
  CHECK(c.mode_curvature(3) == doctest::Approx((1.0 - 9.0) / 4.0));
}

TEST_CASE("radial traces match modified Bessel functions") {
  auto c = fixture(2.0);
  c.d1 = 0.7;
  c.d2 = 1.3;
  const double R = c.inner_radius, Ro = c.outer_radius;
  for (double lambda : {0.05, 0.5, 4.0}) {
    for (int k : {0, 1, 3}) {
      const auto tr = radial_traces(c, lambda, k);
      const double q1 = std::sqrt(c.kappa1 * lambda / c.d1);
      const double w1 = q1 * di(k, q1 * R) / std::cyl_bessel_i(k, q1 * R);
      const double q2 = std::sqrt(c.kappa2 * lambda / c.d2);
      const double a = -dk(k, q2 * Ro), b = di(k, q2 * Ro);
      const double w2 = q2 * (a * di(k, q2 * R) + b * dk(k, q2 * R)) /
                        (a * std::cyl_bessel_i(k, q2 * R) + b * std::cyl_bessel_k(k, q2 * R));
      CHECK(tr.inner == doctest::Approx(w1).epsilon(1e-7));
      CHECK(tr.outer == doctest::Approx(w2).epsilon(1e-7));
    }
  }
}

TEST_CASE("determinant near zero") {
  for (double u : {1.5, 2.0}) {
    const auto c = fixture(u);
    const double lam = 1e-10;
    const double scale = c.determinant_scale();
    // Mode 0 vanishes linearly with slope l^2 (1 - zeta); mode 1 vanishes too.
    const double d0 = mode_determinant(c, lam, 0);
    CHECK(d0 / lam == doctest::Approx(c.latent * c.latent * (1 - c.zeta())).epsilon(1e-3));
    CHECK(std::abs(mode_determinant(c, lam, 1)) <= 1e-6 * scale);
    for (int k = 2; k <= 8; ++k) CHECK(std::abs(mode_determinant(c, lam, k)) >= 1e-2 * scale);
  }
}

TEST_CASE("coarse scan counts") {
  auto c = fixture(2.0);
  c.max_mode = 3;
  c.points_per_decade = 64;
  const auto r = count_positive_eigenvalues(c);
  CHECK(r.positive_count == 1);
  CHECK(r.kernel_dimension == 3);
  REQUIRE(r.modes[0].roots.size() == 1);
  const double lam = r.modes[0].roots[0].lambda;
  CHECK(std::abs(mode_determinant(c, lam, 0)) < 1e-8 * c.determinant_scale());
}

TEST_CASE("spectral validation") {
  auto c = fixture(2.0);
  c.latent = 0.0;
  c.gamma = 0.0;
  try {
    c.validate();
    FAIL("expected WellPosednessLost");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::WellPosednessLost);
  }
  auto d = fixture(2.0);
  d.radial_nodes = 100;
  CHECK_THROWS_AS(d.validate(), Error);
}

TEST_CASE("small multi-disc N_lambda is symmetric and semi-definite") {
  MultiDiscConfig m;
  m.centers = {{0.9, 1.5}, {2.1, 1.5}};
  m.radius = 0.5;
  m.grid = 64;
  m.quadrature = 24;
  m.u = 3.0;
  m.latent = 3.0;
  const auto r = ntd_matrix(m, 1.0);
  CHECK(r.asymmetry <= 1e-8);
  CHECK(r.min_eigenvalue >= -1e-8 * r.norm);
  CHECK(r.matrix.rows() == 48);

  const auto b = b_lambda_spectrum(m, 1e-3);
  CHECK(b.negative_count >= 1);
  const double area = m.width * m.height;
  CHECK(m.heat_capacity_integral() == doctest::Approx(area));
  CHECK(m.interface_measure() == doctest::Approx(2 * std::numbers::pi));
}

TEST_CASE("multi-disc geometry checks") {
  MultiDiscConfig m;
  m.centers = {{0.9, 1.5}, {1.5, 1.5}};
  m.radius = 0.5;
  CHECK_THROWS_AS(m.validate(), Error);
  m.centers = {{0.3, 1.5}};
  CHECK_THROWS_AS(m.validate(), Error);
}
