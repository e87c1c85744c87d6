// One line per acceptance criterion. Tolerances are fixed here; the process
// exits non-zero if any criterion fails.

#include "stefan/equilibria.hpp"
#include "stefan/error.hpp"
#include "stefan/geometry.hpp"
#include "stefan/simulate.hpp"
#include "stefan/spectral.hpp"
#include "stefan/tasks.hpp"
#include "stefan/thermo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

using namespace stefan;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

FreeEnergyModel fixture_model() { return FreeEnergyModel::equal_heat_capacity(1, 0, 0, 1, 1); }

DomainSpec fixture_domain() {
  DomainSpec d;
  d.n = 2;
  d.volume = 9 * pi;
  d.packing_radii = {3.0, 1.5};
  return d;
}

// Fixture oracles with h = u - 1, l = u, kappa = 1, |Omega| = 9 pi.
double oracle_radius(double u) { return 1.0 / (u - 1.0); }
double oracle_zeta(double u) {
  const double r = oracle_radius(u);
  return u * 9 * pi / (u * u * r * r * 2 * pi * r);
}

Outcome criterion1() {
  Outcome o;
  const ReducedEnergy phi(fixture_model(), fixture_domain(), 1.0, 1);
  int seen = 0;
  for (double e0 : {21.5 * pi, 21 * pi}) {
    const auto pts = find_equilibria({fixture_model(), fixture_domain(), 1.0, 1, e0});
    o.require(!pts.empty(), "no equilibria");
    for (const auto& p : pts) {
      ++seen;
      const double u = p.u, r = oracle_radius(u), l = u, gamma_area = 2 * pi * r;
      const double rhs = (oracle_zeta(u) - 1) * l * l * r * r * gamma_area / u;
      const double err = std::abs(p.phi_prime - rhs);
      o.require(err <= 1e-8 * std::abs(p.phi_prime), "identity at u=" + fmt("%.6g", u) + " err " + fmt("%.2e", err));
    }
  }
  const double targets[][3] = {{1.5, -15 * pi, 0.375}, {2.0, 5 * pi, 2.25}};
  for (const auto& t : targets) {
    o.require(std::abs(phi.phi_prime(t[0]) - t[1]) <= 1e-8 * std::abs(t[1]), "phi' target at u=" + fmt("%g", t[0]));
    o.require(std::abs(phi.zeta(t[0]) - t[2]) <= 1e-8 * t[2], "zeta target at u=" + fmt("%g", t[0]));
  }
  o.note(std::to_string(seen) + " equilibria checked");
  return o;
}

Outcome criterion2() {
  Outcome o;
  const ReducedEnergy phi(fixture_model(), fixture_domain(), 1.0, 1);
  const auto iv = phi.admissible_intervals();
  o.require(iv.size() == 1, "expected one admissible interval");
  if (iv.empty()) return o;
  const double umin = phi.argmin(iv[0].lo, iv[0].hi);
  const double pmin = phi.phi(umin);
  const auto above = find_equilibria({fixture_model(), fixture_domain(), 1.0, 1, 1.01 * pmin});
  const auto below = find_equilibria({fixture_model(), fixture_domain(), 1.0, 1, 0.99 * pmin});
  o.require(above.size() == 2, "above min: " + std::to_string(above.size()) + " roots");
  o.require(below.empty(), "below min: " + std::to_string(below.size()) + " roots");

  // 200 interior points, log-spaced in u - lo across the admissible interval.
  const double lo = iv[0].lo, hi = iv[0].hi;
  int convex = 0;
  for (int i = 1; i <= 200; ++i) {
    const double u = lo + std::exp(std::log(1e-6) + (std::log(hi - lo) - std::log(1e-6)) * i / 201.0);
    const double h = std::min({1e-4 * u, 0.25 * (u - lo), 0.25 * (hi - u)});
    const double d2 = phi.phi(u + h) - 2 * phi.phi(u) + phi.phi(u - h);
    if (d2 > 0.0) ++convex;
  }
  o.require(convex == 200, std::to_string(convex) + "/200 convex");
  o.note("min phi " + fmt("%.10g", pmin) + " at u=" + fmt("%.6g", umin));
  return o;
}

Outcome criterion3() {
  Outcome o;
  for (double u : {1.5, 2.0}) {
    const auto c = SpectralConfig::from_equilibrium(fixture_model(), 2, 1.0, u, 3.0);
    const auto r = count_positive_eigenvalues(c);
    o.require(r.kernel_dimension == 3, "kernel " + std::to_string(r.kernel_dimension) + " at u=" + fmt("%g", u));
    for (const auto& m : r.modes) o.require(m.kernel == (m.mode <= 1), "mode " + std::to_string(m.mode) + " kernel flag");
    const double scale = c.determinant_scale();
    for (int k = 0; k <= 8; ++k) {
      const double d = std::abs(mode_determinant(c, 1e-10, k));
      if (k <= 1) {
        o.require(d <= 1e-6 * scale, "mode " + std::to_string(k) + " |D| " + fmt("%.2e", d));
      } else {
        o.require(d >= 1e-2 * scale, "mode " + std::to_string(k) + " |D| " + fmt("%.2e", d));
      }
    }
  }
  return o;
}

Outcome criterion4() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  for (double u : {2.0, 1.5}) {
    const int expected = u == 2.0 ? 1 : 0;
    for (int variant = 0; variant < 4; ++variant) {
      auto c = SpectralConfig::from_equilibrium(fixture_model(), 2, 1.0, u, 3.0);
      if (variant & 1) {
        c.d1 *= 2;
        c.d2 *= 2;
      }
      c.gamma = (variant & 2) ? 0.5 : 0.0;
      const auto r = count_positive_eigenvalues(c);
      o.require(r.positive_count == expected,
                "u=" + fmt("%g", u) + " variant " + std::to_string(variant) + ": " + std::to_string(r.positive_count));
      o.require(r.suspect_count == 0, "suspect minima at u=" + fmt("%g", u));
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(secs <= 60.0, "runtime " + fmt("%.1f", secs) + " s");
  o.note("runtime " + fmt("%.1f", secs) + " s");
  return o;
}

MultiDiscConfig two_discs(double kappa, int grid) {
  MultiDiscConfig m;
  m.centers = {{0.9, 1.5}, {2.1, 1.5}};
  m.radius = 0.5;
  m.grid = grid;
  m.quadrature = 64;
  m.u = 3.0;
  m.latent = 3.0;
  m.kappa1 = m.kappa2 = kappa;
  return m;
}

Outcome criterion5() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto m = two_discs(1.0, 160);
  double prev = INFINITY;
  for (double lam : {1e-4, 1.0, 10.0, 100.0}) {
    const auto r = ntd_matrix(m, lam);
    o.require(r.asymmetry <= 1e-8, "asymmetry " + fmt("%.2e", r.asymmetry) + " at lambda=" + fmt("%g", lam));
    o.require(r.min_eigenvalue >= -1e-8 * r.norm, "PSD defect at lambda=" + fmt("%g", lam));
    if (lam == 1e-4) {
      const Eigen::VectorXd e = Eigen::VectorXd::Ones(r.matrix.rows());
      const double ne = e.dot(r.weights.asDiagonal() * (r.matrix * e));
      const double area = m.interface_measure();
      const double measured = lam * ne / area;
      const double a0 = area / r.discrete_heat_capacity;
      const double rel = std::abs(measured - a0) / a0;
      o.require(rel <= 0.02, "a0 mismatch " + fmt("%.3e", rel));
      o.note("lambda(Ne|e)/|G| = " + fmt("%.6g", measured) + " vs a0 " + fmt("%.6g", a0));
    } else {
      o.require(r.norm < prev, "norm not decreasing at lambda=" + fmt("%g", lam));
      prev = r.norm;
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(secs <= 600.0, "runtime " + fmt("%.1f", secs) + " s");
  o.note("runtime " + fmt("%.1f", secs) + " s");
  return o;
}

Outcome criterion6() {
  Outcome o;
  for (double kappa : {1.0, 0.4}) {
    const auto m = two_discs(kappa, 96);
    const int expected = m.zeta() > 1 ? 2 : 1;
    const auto scan = scan_b_lambda(m);
    o.require(scan.crossings == expected,
              "kappa=" + fmt("%g", kappa) + " crossings " + std::to_string(scan.crossings));

    auto model = FreeEnergyModel::equal_heat_capacity(1, 0, 0, 1, kappa);
    model.with_undercooling(1.0);
    MultiSphereConfig rc(model);
    rc.domain.n = 2;
    rc.domain.volume = 9.0;
    rc.radii = {0.5, 0.5};
    rc.u0 = 3.0;
    MultiSphere ms(rc);
    const auto ev = ms.jacobian_eigenvalues(ms.initial_state());
    const auto pos = std::count_if(ev.begin(), ev.end(), [](double x) { return x > 0.0; });
    o.require(pos == expected, "kappa=" + fmt("%g", kappa) + " jacobian positives " + std::to_string(pos));
    o.note("zeta " + fmt("%.4g", m.zeta()) + ": " + std::to_string(scan.crossings) + " crossings");
  }
  return o;
}

RadialStefanConfig radial(double s0, double u_bulk, double gamma, int cells, double t_end) {
  auto model = fixture_model();
  if (gamma > 0) model.with_undercooling(gamma);
  RadialStefanConfig c(model);
  c.outer_radius = 3.0;
  c.s0 = s0;
  c.u_bulk = u_bulk;
  c.inner_cells = c.outer_cells = cells;
  c.t_end = t_end;
  return c;
}

Outcome criterion7() {
  Outcome o;
  const RadialStefanConfig runs[] = {radial(2.02, 1.5, 0.0, 200, 3.0), radial(1.8, 1.5, 0.5, 200, 3.0),
                                     radial(1.001, 2.0, 0.0, 100, 3.0), radial(0.999, 2.0, 0.0, 100, 10.0)};
  double drift = 0, dphi = 0;
  for (const auto& c : runs) {
    const auto r = RadialStefan(c).run();
    drift = std::max(drift, r.max_energy_drift);
    dphi = std::min(dphi, r.min_entropy_increment);
  }
  o.require(drift <= 1e-6, "energy drift " + fmt("%.2e", drift));
  o.require(dphi >= -1e-8, "entropy decrement " + fmt("%.2e", dphi));
  o.note("drift " + fmt("%.1e", drift) + ", min dPhi " + fmt("%.1e", dphi));

  for (double gamma : {0.0, 0.5}) {
    RadialStefan sim(radial(2.05, 1.5, gamma, 200, 0.05));
    sim.run();
    const RadialState s0 = sim.state();
    const double p = sim.entropy_production(s0), phi0 = sim.entropy(s0);
    std::vector<double> errs;
    for (double dt = 4e-3; dt >= 5e-4; dt /= 2) {
      sim.set_state(s0);
      sim.step(dt);
      errs.push_back(std::abs((sim.entropy(sim.state()) - phi0) / dt - p) / p);
    }
    for (std::size_t i = 1; i < errs.size(); ++i) {
      const double ratio = errs[i - 1] / errs[i];
      o.require(ratio >= 1.7 && ratio <= 2.3, "gamma=" + fmt("%g", gamma) + " halving ratio " + fmt("%.2f", ratio));
    }
    o.require(errs.back() <= 2e-3, "gamma=" + fmt("%g", gamma) + " production mismatch " + fmt("%.2e", errs.back()));
    o.note("gamma=" + fmt("%g", gamma) + " mismatch " + fmt("%.1e", errs.front()) + " -> " + fmt("%.1e", errs.back()));
  }
  return o;
}

Outcome criterion8() {
  Outcome o;
  {
    const auto c = radial(2.02, 1.5, 0.0, 200, 10.0);
    const auto r = RadialStefan(c).run();
    o.require(!r.stop_code, "stable run stopped: " + r.stop_reason);
    const auto lim = stable_front_limit(c.model, 2, 3.0, 1.0, r.initial_energy);
    o.require(lim.has_value(), "no stable limit");
    if (lim) {
      const auto fit = fit_front_decay(r.series, lim->radius, 0.5 * c.t_end);
      o.require(fit.slope < 0.0 && fit.r_squared >= 0.99, "fit R^2 " + fmt("%.4f", fit.r_squared));
      const double es = std::abs(r.final_state.s - lim->radius) / lim->radius;
      const double eu = std::abs(r.final_state.u_s - lim->u) / lim->u;
      o.require(es <= 5e-3 && eu <= 5e-3, "final mismatch s " + fmt("%.2e", es) + " u " + fmt("%.2e", eu));
      o.note("stable: rate " + fmt("%.3f", -fit.slope) + ", R^2 " + fmt("%.5f", fit.r_squared));
    }
  }
  for (double s0 : {1.001, 0.999}) {
    const auto r = RadialStefan(radial(s0, 2.0, 0.0, 100, 10.0)).run();
    double prev = std::abs(s0 - 1.0);
    const double first = prev;
    bool monotone = true;
    for (const auto& p : r.series) {
      const double dev = std::abs(p.s - 1.0);
      if (dev < prev * (1 - 1e-9)) monotone = false;
      prev = std::max(prev, dev);
    }
    o.require(monotone, "s0=" + fmt("%g", s0) + " deviation not monotone");
    o.require(prev >= 10 * first, "s0=" + fmt("%g", s0) + " growth " + fmt("%.1f", prev / first));
    o.note("s0=" + fmt("%g", s0) + ": growth x" + fmt("%.0f", prev / first) + " (" + r.stop_reason + ")");
  }
  return o;
}

Outcome criterion9() {
  Outcome o;
  double worst_shift = 0;
  for (int n : {2, 3}) {
    for (double c : {-0.3, 0.0, 0.2, 0.45}) {
      const auto h = mean_curvature(SphereChart::centered(n, 1.0), HeightField::constant(n, c));
      for (double v : h) worst_shift = std::max(worst_shift, std::abs(v + 1.0 / (1.0 + c)));
    }
  }
  o.require(worst_shift <= 1e-10, "constant shift " + fmt("%.2e", worst_shift));

  double worst_mode = 0;
  for (double radius : {0.5, 1.0, 2.0}) {
    for (int k = 0; k <= 16; ++k) {
      const double exact = (1.0 - k * k) / (radius * radius);
      worst_mode = std::max(worst_mode, std::abs(linearized_mode_eigenvalue(2, radius, k) - exact));
    }
  }
  o.require(worst_mode <= 1e-12, "mode eigenvalues " + fmt("%.2e", worst_mode));

  const double radius = 1.5, amp = 1e-6;
  double worst_lin = 0;
  for (int n : {2, 3}) {
    HeightField rho = HeightField::constant(n, 0.0);
    if (n == 2) {
      rho = HeightField::circle({0.2 * amp, 0, amp, 0, -0.5 * amp}, {0, 0.7 * amp, 0, 0.1 * amp});
    } else {
      std::vector<double> sh(16, 0.0);
      sh[HeightField::sphere_index(2, 1)] = amp;
      sh[HeightField::sphere_index(3, -2)] = 0.4 * amp;
      rho = HeightField::sphere(3, sh);
    }
    const auto chart = SphereChart::centered(n, radius);
    const auto h = mean_curvature(chart, rho);
    const auto lin = linearized_curvature(chart, rho);
    double diff = 0, scale = 0;
    for (std::size_t i = 0; i < h.size(); ++i) {
      diff = std::max(diff, std::abs(h[i] + 1.0 / radius - lin.grid()[i].value));
      scale = std::max(scale, std::abs(lin.grid()[i].value));
    }
    worst_lin = std::max(worst_lin, diff / scale);
  }
  o.require(worst_lin <= 1e-4, "linearization " + fmt("%.2e", worst_lin));
  o.note("shift " + fmt("%.1e", worst_shift) + ", modes " + fmt("%.1e", worst_mode) + ", lin " + fmt("%.1e", worst_lin));
  return o;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"phi' and zeta identity at equilibria", criterion1},
      {"root count around min phi, convexity", criterion2},
      {"kernel dimension mn+1", criterion3},
      {"positive eigenvalue count vs zeta", criterion4},
      {"N_lambda symmetry, PSD, a0 limit, decay", criterion5},
      {"multi-disc B_lambda crossings", criterion6},
      {"energy conservation, entropy, production", criterion7},
      {"nonlinear stability and instability", criterion8},
      {"curvature and linearization", criterion9},
  };
  int failed = 0, index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failed;
    std::printf("[%s] %d %s: %s\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
