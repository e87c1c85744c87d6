#include "stefan/error.hpp"
#include "stefan/geometry.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace stefan;
using std::numbers::pi;

namespace {

// Height of a circle/sphere of radius R whose center sits at distance d along
// the polar axis, seen from the reference center.
double shifted(double theta, double radius, double d) {
  const double s = std::sin(theta);
  return d * std::cos(theta) + std::sqrt(radius * radius - d * d * s * s) - radius;
}

double legendre(int l, double x) {
  double p0 = 1.0, p1 = x;
  if (l == 0) return p0;
  for (int k = 2; k <= l; ++k) {
    const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

}  // namespace

TEST_CASE("weingarten map of the reference sphere") {
  const auto w2 = weingarten(SphereChart::centered(2, 2.0));
  CHECK(w2.trace == doctest::Approx(-0.5));
  const auto w3 = weingarten(SphereChart::centered(3, 2.0));
  REQUIRE(w3.principal_curvatures.size() == 2);
  CHECK(w3.trace == doctest::Approx(-1.0));
  CHECK(w3.norm == doctest::Approx(0.5));
}

TEST_CASE("gauss-legendre integrates polynomials") {
  std::vector<double> x, w;
  gauss_legendre(12, x, w);
  double s0 = 0, s6 = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s0 += w[i];
    s6 += w[i] * std::pow(x[i], 6);
  }
  CHECK(s0 == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(s6 == doctest::Approx(2.0 / 7.0).epsilon(1e-14));
}

TEST_CASE("constant shift curvature") {
  for (int n : {2, 3}) {
    const double radius = 1.3, c = 0.2;
    const auto h = mean_curvature(SphereChart::centered(n, radius), HeightField::constant(n, c));
    for (double v : h) CHECK(std::abs(v + 1.0 / (radius + c)) < 1e-10);
  }
}

TEST_CASE("translated circle keeps its curvature") {
  const double radius = 1.0, d = 0.05;
  const int modes = 32, pts = 512;
  std::vector<double> cs(modes + 1, 0.0), sn(modes + 1, 0.0);
  for (int j = 0; j < pts; ++j) {
    const double t = 2 * pi * j / pts;
    const double r = shifted(t, radius, d);
    for (int k = 0; k <= modes; ++k) cs[k] += r * std::cos(k * t) * (k == 0 ? 1.0 : 2.0) / pts;
  }
  const auto h = mean_curvature(SphereChart::centered(2, radius), HeightField::circle(cs, sn));
  for (double v : h) CHECK(std::abs(v + 1.0 / radius) < 1e-10);
}

TEST_CASE("translated sphere keeps its curvature") {
  const double radius = 1.0, d = 0.05;
  const int degree = 24;
  std::vector<double> x, w;
  gauss_legendre(96, x, w);
  std::vector<double> sh((degree + 1) * (degree + 1), 0.0);
  for (int l = 0; l <= degree; ++l) {
    double c = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      c += w[i] * shifted(std::acos(x[i]), radius, d) * legendre(l, x[i]);
    }
    sh[HeightField::sphere_index(l, 0)] = 2 * pi * std::sqrt((2 * l + 1) / (4 * pi)) * c;
  }
  const auto h = mean_curvature(SphereChart::centered(3, radius), HeightField::sphere(degree, sh));
  for (double v : h) CHECK(std::abs(v + 1.0 / radius) < 1e-10);
}

TEST_CASE("polar curve curvature") {
  const double radius = 1.0, eps = 0.03;
  std::vector<double> cs{0, 0, 0, eps};
  const auto rho = HeightField::circle(cs, {});
  const auto h = mean_curvature(SphereChart::centered(2, radius), rho);
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double t = rho.grid()[i].theta;
    const double r = radius + eps * std::cos(3 * t);
    const double r1 = -3 * eps * std::sin(3 * t), r2 = -9 * eps * std::cos(3 * t);
    const double k = (r * r + 2 * r1 * r1 - r * r2) / std::pow(r * r + r1 * r1, 1.5);
    CHECK(h[i] == doctest::Approx(-k).epsilon(1e-12));
  }
}

TEST_CASE("surface of revolution curvature") {
  // Meridian and parallel curvatures of r(theta) = R + rho(theta).
  const double radius = 1.0, c = 0.05;
  const double y20 = std::sqrt(5 / (4 * pi));
  std::vector<double> sh(9, 0.0);
  sh[HeightField::sphere_index(2, 0)] = c;
  const auto rho = HeightField::sphere(2, sh);
  const auto h = mean_curvature(SphereChart::centered(3, radius), rho);
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double t = rho.grid()[i].theta;
    const double ct = std::cos(t), st = std::sin(t);
    const double r = radius + c * y20 * (3 * ct * ct - 1) / 2;
    const double r1 = -3 * c * y20 * ct * st;
    const double r2 = -3 * c * y20 * std::cos(2 * t);
    const double q = std::sqrt(r * r + r1 * r1);
    const double k1 = (r * r + 2 * r1 * r1 - r * r2) / (q * q * q);
    const double k2 = (r * st - r1 * ct) / (q * r * st);
    CHECK(h[i] == doctest::Approx(-(k1 + k2) / 2).epsilon(1e-10));
  }
}

TEST_CASE("linearized mode eigenvalues") {
  for (int k = 0; k <= 8; ++k) {
    CHECK(std::abs(linearized_mode_eigenvalue(2, 2.0, k) - (1.0 - k * k) / 4.0) < 1e-12);
    CHECK(std::abs(linearized_mode_eigenvalue(3, 2.0, k) - (2.0 - k * (k + 1.0)) / 8.0) < 1e-12);
  }
}

TEST_CASE("nonlinear curvature linearizes correctly") {
  const double radius = 1.5, amp = 1e-6;
  for (int n : {2, 3}) {
    HeightField rho = HeightField::constant(n, 0.0);
    if (n == 2) {
      rho = HeightField::circle({0.2 * amp, 0, amp, 0, -0.5 * amp}, {0, 0.7 * amp, 0, 0.1 * amp});
    } else {
      std::vector<double> sh(16, 0.0);
      sh[HeightField::sphere_index(2, 1)] = amp;
      sh[HeightField::sphere_index(3, -2)] = 0.4 * amp;
      sh[HeightField::sphere_index(1, 0)] = -0.3 * amp;
      rho = HeightField::sphere(3, sh);
    }
    const auto chart = SphereChart::centered(n, radius);
    const auto h = mean_curvature(chart, rho);
    const auto lin = linearized_curvature(chart, rho);
    double worst = 0, scale = 0;
    for (std::size_t i = 0; i < h.size(); ++i) {
      worst = std::max(worst, std::abs(h[i] + 1.0 / radius - lin.grid()[i].value));
      scale = std::max(scale, std::abs(lin.grid()[i].value));
    }
    CHECK(worst <= 1e-4 * scale);
  }
}

TEST_CASE("perturbation bounds") {
  const auto chart = SphereChart::centered(2, 1.0);
  CHECK_THROWS_AS(mean_curvature(chart, HeightField::constant(2, 0.6)), Error);
  CHECK_THROWS_AS(mean_curvature(chart, HeightField::circle({0, 0, 0.1}, {})), Error);  // |grad| = 0.2
  SphereChart bad = chart;
  bad.half_width = 0.8;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("normal velocity, area and volume") {
  const auto chart = SphereChart::centered(2, 1.0);
  const auto rho = HeightField::constant(2, 0.1);
  for (double v : normal_velocity(chart, rho, HeightField::constant(2, 0.5))) CHECK(v == doctest::Approx(0.5));
  const auto m = surface_measure_and_volume(chart, rho);
  CHECK(m.area == doctest::Approx(2 * pi * 1.1).epsilon(1e-12));
  CHECK(m.volume == doctest::Approx(pi * 1.21).epsilon(1e-12));

  const auto chart3 = SphereChart::centered(3, 1.0);
  const auto m3 = surface_measure_and_volume(chart3, HeightField::constant(3, 0.1));
  CHECK(m3.area == doctest::Approx(4 * pi * 1.21).epsilon(1e-12));
  CHECK(m3.volume == doctest::Approx(4.0 / 3.0 * pi * 1.331).epsilon(1e-12));
}
