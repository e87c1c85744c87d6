#include "stefan/error.hpp"
#include "stefan/thermo.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace stefan;

namespace {

FreeEnergyModel fixture() { return FreeEnergyModel::equal_heat_capacity(1, 0, 0, 1, 1); }

}  // namespace

TEST_CASE("fixture free energies") {
  const auto m = fixture();
  CHECK(m.psi(Phase::Inner, 1.0) == doctest::Approx(1.0));
  CHECK(m.psi(Phase::Outer, 1.0) == doctest::Approx(1.0));
  CHECK(std::abs(m.psi(Phase::Outer, std::exp(1.0))) < 1e-15);
}

TEST_CASE("custom law passes through") {
  PhaseLaw sq{[](double u) { return u * u; }, [](double u) { return 2 * u; }, [](double) { return 2.0; }};
  PhaseLaw lin{[](double u) { return -u * std::log(u); }, [](double u) { return -std::log(u) - 1; },
               [](double u) { return -1.0 / u; }};
  const auto m = FreeEnergyModel::custom(lin, sq);
  CHECK(m.psi(Phase::Outer, 2.0) == 4.0);
  CHECK(m.family() == EnergyFamily::Custom);
}

TEST_CASE("derived quantities by hand") {
  const auto m = fixture();
  // psi1 = 1 - u ln u: eps1 = 1 + u, psi2 = u - u ln u: eps2 = u.
  CHECK(m.eps(Phase::Inner, 2.0) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(m.eps(Phase::Outer, 2.0) == doctest::Approx(2.0).epsilon(1e-14));
  for (double u : {0.3, 1.0, 7.5}) {
    for (Phase p : {Phase::Inner, Phase::Outer}) {
      const auto d = m.derived(p, u);
      CHECK(std::abs(d.eps - (m.psi(p, u) + u * d.eta)) < 1e-13);
      CHECK(d.kappa == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("jump and latent heat") {
  const auto m = fixture();
  CHECK(m.jump_h(2.0) == doctest::Approx(1.0));
  CHECK(std::abs(m.jump_h(1.0)) < 1e-15);
  CHECK(m.latent_l(2.0) == doctest::Approx(2.0));
  CHECK(m.latent_l(1.0) > 0.0);  // l(u_m) > 0 at the melting point

  const auto ex2 = FreeEnergyModel::linear_internal_energy(0, 0, 2, -1, 0, 1);
  CHECK(ex2.jump_h(1.0) == doctest::Approx(-1.0));
  for (double w : {0.5, 2.0, 4.0}) CHECK(ex2.jump_h(w) == doctest::Approx(-1.0 + w * std::log(w)));
}

TEST_CASE("melting temperature") {
  CHECK(fixture().melting_temperature().roots.at(0) == doctest::Approx(1.0).epsilon(1e-12));

  // h = 2 - u: h0 > 0, h1 < 0, u_m = -h0 / h1.
  const auto case2 = FreeEnergyModel::equal_heat_capacity(0, 1, 2, 0, 1);
  const auto mp = case2.melting_temperature();
  REQUIRE(mp.roots.size() == 1);
  CHECK(mp.unique);
  CHECK(mp.roots[0] == doctest::Approx(2.0).epsilon(1e-12));

  // h = alpha + w ln w with alpha in (0, 1/e) has two zeros.
  const double alpha = 0.2;
  const auto two = FreeEnergyModel::linear_internal_energy(0, 0, 2, alpha, 0, 1);
  const auto z = two.melting_temperature();
  REQUIRE(z.roots.size() == 2);
  CHECK_FALSE(z.unique);
  for (double w : z.roots) CHECK(std::abs(alpha + w * std::log(w)) < 1e-12);

  const auto none = FreeEnergyModel::equal_heat_capacity(0, 0, 1, 0, 1);
  CHECK_THROWS_AS(none.melting_temperature(), Error);
}

TEST_CASE("out of range temperature") {
  const auto m = fixture();
  try {
    m.psi(Phase::Inner, 1e4);
    FAIL("expected a domain error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Domain);
  }
}

TEST_CASE("finite-difference consistency for both families") {
  std::mt19937_64 rng(7);
  const FreeEnergyModel models[] = {fixture(), FreeEnergyModel::linear_internal_energy(0.4, -1, 2, -1, 0.5, 1)};
  for (const auto& m : models) {
    std::uniform_real_distribution<double> dist(std::log(m.u_lo()), std::log(m.u_hi()));
    for (int i = 0; i < 100; ++i) {
      const double u = std::exp(dist(rng));
      const double h = 1e-5 * u;
      for (Phase p : {Phase::Inner, Phase::Outer}) {
        const double k = m.kappa(p, u);
        const double de = (m.eps(p, u + h) - m.eps(p, u - h)) / (2 * h);
        const double dn = (m.eta(p, u + h) - m.eta(p, u - h)) / (2 * h);
        CHECK(std::abs(de - k) <= 1e-6 * (1 + std::abs(k)));
        CHECK(std::abs(dn - k / u) <= 1e-6 * (1 + std::abs(k / u)));
      }
      const double l = m.latent_l(u);
      CHECK(std::abs(l + u * (m.eta(Phase::Outer, u) - m.eta(Phase::Inner, u))) <= 1e-12 * (1 + std::abs(l)));
    }
  }
}

TEST_CASE("equal heat capacity gives affine h") {
  const auto m = FreeEnergyModel::equal_heat_capacity(0.3, -2, 1.1, 0.5, 2.5);
  const double s1 = (m.jump_h(1.0) - m.jump_h(0.5)) / 0.5;
  const double s2 = (m.jump_h(3.0) - m.jump_h(1.0)) / 2.0;
  CHECK(s1 == doctest::Approx(s2).epsilon(1e-13));
  CHECK(m.kappa(Phase::Inner, 2.0) == m.kappa(Phase::Outer, 2.0));
}

TEST_CASE("validation rejects bad coefficients") {
  CHECK_THROWS_AS(FreeEnergyModel::equal_heat_capacity(1, 0, 0, 1, -1).validate(), Error);
  auto m = fixture();
  m.with_conductivity(1.0, -0.5);
  CHECK_THROWS_AS(m.validate(), Error);
  auto g = fixture();
  g.with_undercooling([](double u) { return u - 1.0; }, false);
  CHECK_THROWS_AS(g.validate(), Error);
  CHECK_NOTHROW(fixture().validate());
}
