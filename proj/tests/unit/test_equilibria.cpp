#include "stefan/equilibria.hpp"
#include "stefan/error.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace stefan;
using std::numbers::pi;

namespace {

DomainSpec disc9pi() {
  DomainSpec d;
  d.n = 2;
  d.volume = 9 * pi;
  d.packing_radii = {3.0, 1.5};
  return d;
}

ReducedEnergy fixture_phi() {
  return ReducedEnergy(FreeEnergyModel::equal_heat_capacity(1, 0, 0, 1, 1), disc9pi(), 1.0, 1);
}

}  // namespace

TEST_CASE("radius of temperature") {
  const auto phi = fixture_phi();
  CHECK(phi.radius(2.0) == doctest::Approx(1.0));
  CHECK(phi.radius(1.5) == doctest::Approx(2.0));
  CHECK_THROWS_AS(phi.radius(1.0), Error);
}

TEST_CASE("phi hand values") {
  const auto phi = fixture_phi();
  // 18 pi + pi + 2 pi and 13.5 pi + 4 pi + 4 pi.
  CHECK(phi.phi(2.0) == doctest::Approx(21 * pi).epsilon(1e-13));
  CHECK(phi.phi(1.5) == doctest::Approx(21.5 * pi).epsilon(1e-13));
  for (double u : {1.4, 2.0, 5.0, 40.0}) CHECK(phi.phi_hform(u) == doctest::Approx(phi.phi(u)).epsilon(1e-10));
}

TEST_CASE("phi prime and zeta hand values") {
  const auto phi = fixture_phi();
  CHECK(phi.phi_prime(2.0) == doctest::Approx(5 * pi).epsilon(1e-13));
  CHECK(phi.phi_prime(1.5) == doctest::Approx(-15 * pi).epsilon(1e-13));
  CHECK(phi.zeta(2.0) == doctest::Approx(2.25).epsilon(1e-13));
  CHECK(phi.zeta(1.5) == doctest::Approx(0.375).epsilon(1e-13));
  for (double u : {1.5, 2.0}) {
    CHECK(phi.phi_prime_from_zeta(u) == doctest::Approx(phi.phi_prime(u)).epsilon(1e-12));
    const double h = 1e-6 * u;
    CHECK((phi.phi(u + h) - phi.phi(u - h)) / (2 * h) == doctest::Approx(phi.phi_prime(u)).epsilon(1e-6));
  }
}

TEST_CASE("admissible set and blow-up") {
  const auto phi = fixture_phi();
  // h(u) > sigma / R_m = 1/3.
  const auto iv = phi.admissible_intervals();
  REQUIRE(iv.size() == 1);
  CHECK(iv[0].lo == doctest::Approx(4.0 / 3.0).epsilon(1e-8));
  CHECK_THROWS_AS(phi.phi(1.2), Error);
  double prev = phi.phi(1.0 + 1.0 / 3.0 + 1e-2);
  for (double d : {1e-3, 1e-4, 1e-5, 1e-6}) {
    const double cur = phi.phi(1.0 + 1.0 / 3.0 + d);
    CHECK(cur > prev);
    prev = cur;
  }
}

TEST_CASE("fixture equilibria and classes") {
  EquilibriumProblem p{FreeEnergyModel::equal_heat_capacity(1, 0, 0, 1, 1), disc9pi(), 1.0, 1, 21.5 * pi};
  const auto pts = find_equilibria(p);
  REQUIRE(pts.size() == 2);
  const auto& stable = pts[0].zeta < 1 ? pts[0] : pts[1];
  CHECK(stable.u == doctest::Approx(1.5).epsilon(1e-11));
  CHECK(stable.radius == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(stable.stability == StabilityClass::Stable);
  CHECK(stable.feasible);

  p.energy = 21 * pi;
  const auto pts2 = find_equilibria(p);
  bool found = false;
  for (const auto& q : pts2) {
    if (std::abs(q.u - 2.0) < 1e-9) {
      found = true;
      CHECK(q.stability == StabilityClass::Unstable);
      CHECK(q.radius == doctest::Approx(1.0));
    }
  }
  CHECK(found);
}

TEST_CASE("classification rule") {
  CHECK(classify(1, 0.5) == StabilityClass::Stable);
  CHECK(classify(1, 1.5) == StabilityClass::Unstable);
  CHECK(classify(2, 0.5) == StabilityClass::Unstable);
  CHECK(classify(1, 1.0 + 1e-11) == StabilityClass::Marginal);
}

TEST_CASE("degenerate latent heat") {
  // Constant h = 1: l = u h' vanishes identically.
  const auto m = FreeEnergyModel::equal_heat_capacity(0, 0, 1, 0, 1);
  ReducedEnergy phi(m, disc9pi(), 0.1, 1);
  try {
    phi.zeta(2.0);
    FAIL("expected DegenerateLatentHeat");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateLatentHeat);
  }
}

TEST_CASE("domain validation") {
  DomainSpec d = disc9pi();
  d.packing_radii = {1.0, 2.0};
  CHECK_THROWS_AS(d.validate(), Error);
  d.packing_radii = {3.5};
  CHECK_THROWS_AS(d.validate(), Error);
  CHECK(unit_sphere_measure(3) == doctest::Approx(4 * pi));
}
