#include "stefan/check.hpp"

#include "stefan/equilibria.hpp"
#include "stefan/geometry.hpp"
#include "stefan/simulate.hpp"
#include "stefan/spectral.hpp"
#include "stefan/tasks.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace stefan {

bool CheckReport::passed() const {
  return std::all_of(items.begin(), items.end(), [](const CheckItem& c) { return c.passed; });
}

Json CheckReport::to_json() const {
  Json j;
  j["passed"] = passed();
  j["warnings"] = warnings;
  Json arr = Json::array();
  for (const auto& c : items) {
    Json x;
    x["suite"] = c.suite;
    x["name"] = c.name;
    x["passed"] = c.passed;
    x["measured"] = std::isfinite(c.measured) ? Json(c.measured) : Json(nullptr);
    x["tolerance"] = c.tolerance;
    if (!c.detail.empty()) x["detail"] = c.detail;
    arr.push_back(x);
  }
  j["items"] = arr;
  return j;
}

namespace {

class Suite {
 public:
  Suite(CheckReport& r, std::string name) : r_(r), name_(std::move(name)) {}

  // Passes when measured <= tolerance.
  void at_most(const std::string& item, double measured, double tol, std::string detail = {}) {
    r_.items.push_back({name_, item, measured <= tol, measured, tol, std::move(detail)});
  }
  void expect(const std::string& item, bool ok, std::string detail = {}) {
    r_.items.push_back({name_, item, ok, ok ? 0.0 : 1.0, 0.0, std::move(detail)});
  }

 private:
  CheckReport& r_;
  std::string name_;
};

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

void thermo_suite(CheckReport& rep, const FreeEnergyModel& model, std::uint64_t seed) {
  Suite s(rep, "thermo");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(std::log(model.u_lo()), std::log(model.u_hi()));
  double eps_err = 0.0, eta_err = 0.0, latent_err = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double u = std::exp(dist(rng));
    const double h = 1e-5 * u;
    const double up = std::min(u + h, model.u_hi()), dn = std::max(u - h, model.u_lo());
    for (Phase p : {Phase::Inner, Phase::Outer}) {
      const double k = model.kappa(p, u);
      const double de = (model.eps(p, up) - model.eps(p, dn)) / (up - dn);
      const double dh = (model.eta(p, up) - model.eta(p, dn)) / (up - dn);
      eps_err = std::max(eps_err, std::abs(de - k) / (1.0 + std::abs(k)));
      eta_err = std::max(eta_err, std::abs(dh - k / u) / (1.0 + std::abs(k / u)));
    }
    const double l = model.latent_l(u);
    const double l2 = -u * (model.eta(Phase::Outer, u) - model.eta(Phase::Inner, u));
    latent_err = std::max(latent_err, std::abs(l - l2) / (1.0 + std::abs(l)));
  }
  s.at_most("eps_prime_equals_kappa", eps_err, 1e-6);
  s.at_most("eta_prime_equals_kappa_over_u", eta_err, 1e-6);
  s.at_most("latent_heat_identity", latent_err, 1e-12);
  if (model.family() == EnergyFamily::EqualHeatCapacity) {
    double kdiff = 0.0;
    for (double u : {model.u_lo(), std::sqrt(model.u_lo() * model.u_hi()), model.u_hi()}) {
      kdiff = std::max(kdiff, std::abs(model.kappa(Phase::Inner, u) - model.kappa(Phase::Outer, u)));
    }
    s.at_most("equal_heat_capacities", kdiff, 1e-12);
    const double u0 = 0.5, u1 = 1.0, u2 = 2.0;
    const double slope1 = (model.jump_h(u1) - model.jump_h(u0)) / (u1 - u0);
    const double slope2 = (model.jump_h(u2) - model.jump_h(u1)) / (u2 - u1);
    s.at_most("h_affine", std::abs(slope1 - slope2), 1e-12 * (1.0 + std::abs(slope1)));
  }
}

void equilibria_suite(CheckReport& rep, const RunConfig& cfg) {
  Suite s(rep, "equilibria");
  const auto problem = cfg.equilibrium_problem();
  ReducedEnergy phi(problem.model, problem.domain, problem.sigma, problem.m);
  const auto points = find_equilibria(problem);
  s.expect("equilibria_found", !points.empty(), std::to_string(points.size()) + " equilibria");
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    const std::string tag = "[" + std::to_string(i) + "] ";
    s.at_most(tag + "energy_residual", rel(phi.phi(p.u), problem.energy), 1e-10);
    s.at_most(tag + "radius_identity", rel(p.radius, problem.sigma / problem.model.jump_h(p.u)), 1e-10);
    s.at_most(tag + "phi_forms_agree", rel(phi.phi_hform(p.u), phi.phi(p.u)), 1e-10);
    const double h = 1e-6 * p.u;
    const double fd = (phi.phi(p.u + h) - phi.phi(p.u - h)) / (2.0 * h);
    s.at_most(tag + "phi_prime_finite_difference", rel(fd, p.phi_prime), 1e-5);
    if (std::isfinite(p.zeta)) {
      s.at_most(tag + "phi_prime_zeta_identity",
                std::abs(p.phi_prime - phi.phi_prime_from_zeta(p.u)) / std::abs(p.phi_prime), 1e-8);
    }
    s.expect(tag + "classification", p.stability == classify(problem.m, p.zeta), to_string(p.stability));
  }
}

void geometry_suite(CheckReport& rep, int n) {
  Suite s(rep, "geometry");
  const double radius = 1.0;
  const auto chart = SphereChart::centered(n, radius);
  const double c = 0.1;
  const auto shift = HeightField::constant(n, c);
  double err = 0.0;
  for (double h : mean_curvature(chart, shift)) err = std::max(err, std::abs(h + 1.0 / (radius + c)));
  s.at_most("constant_shift_curvature", err, 1e-10);

  const double amp = 1e-6;
  HeightField rho = n == 2 ? HeightField::circle({0.0, 0.0, amp}, {0.0, 0.3 * amp})
                           : [&] {
                               std::vector<double> coeffs(9, 0.0);
                               coeffs[HeightField::sphere_index(2, 1)] = amp;
                               coeffs[HeightField::sphere_index(1, -1)] = 0.3 * amp;
                               return HeightField::sphere(2, coeffs);
                             }();
  const auto nonlinear = mean_curvature(chart, rho);
  const auto lin = linearized_curvature(chart, rho);
  double worst = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < nonlinear.size(); ++i) {
    const double dh = nonlinear[i] + 1.0 / radius;
    worst = std::max(worst, std::abs(dh - lin.grid()[i].value));
    scale = std::max(scale, std::abs(lin.grid()[i].value));
  }
  s.at_most("linearization_consistency", worst / scale, 1e-4);
}

void spectral_suite(CheckReport& rep, const RunConfig& cfg, const FreeEnergyModel& model, int jobs) {
  Suite s(rep, "spectral");
  double u = 0.0;
  if (cfg.spectrum) {
    u = cfg.spectrum->temperature;
  } else {
    const auto pts = find_equilibria(cfg.equilibrium_problem());
    if (pts.empty()) {
      s.expect("equilibrium_available", false, "no equilibrium to linearize at");
      return;
    }
    u = pts.front().u;
  }
  auto sc = SpectralConfig::from_equilibrium(model, cfg.domain.n, cfg.problem.sigma, u, cfg.outer_radius());
  sc.jobs = jobs;
  if (cfg.spectrum && cfg.spectrum->concentric) {
    sc.max_mode = cfg.spectrum->concentric->max_mode;
    sc.radial_nodes = cfg.spectrum->concentric->radial_nodes;
  }
  const auto res = count_positive_eigenvalues(sc);
  const int predicted = res.zeta > 1.0 ? 1 : 0;
  s.expect("positive_count_matches_zeta", res.positive_count == predicted,
           "positive " + std::to_string(res.positive_count) + ", predicted " + std::to_string(predicted));
  s.expect("kernel_dimension", res.kernel_dimension == cfg.domain.n + 1,
           "kernel " + std::to_string(res.kernel_dimension));
  s.expect("no_suspects", res.suspect_count == 0, std::to_string(res.suspect_count) + " suspects");
}

void simulate_suite(CheckReport& rep, const RunConfig& cfg, const FreeEnergyModel& model) {
  Suite s(rep, "simulate");
  const double r_out = cfg.outer_radius();
  const auto problem = cfg.equilibrium_problem();
  const auto lim = stable_front_limit(model, cfg.domain.n, r_out, cfg.problem.sigma, problem.energy);
  if (!lim) {
    s.expect("stable_equilibrium_available", false, "no stable single-sphere equilibrium at this energy");
    return;
  }
  RadialStefanConfig rc(model);
  rc.sigma = cfg.problem.sigma;
  rc.n = cfg.domain.n;
  rc.outer_radius = r_out;
  rc.s0 = lim->radius;
  const double u_eq = lim->u;
  rc.initial_profile = [u_eq](double) { return u_eq; };
  rc.inner_cells = rc.outer_cells = 50;
  rc.t_end = 0.5;
  RadialStefan sim(rc);
  const auto res = sim.run();
  s.expect("run_completed", !res.stop_code, res.stop_reason);
  s.at_most("stationary_front", std::abs(res.final_state.s - lim->radius), 1e-8);
  s.at_most("energy_drift", res.max_energy_drift, 1e-6);
  s.at_most("entropy_decrease", std::max(0.0, -res.min_entropy_increment), 1e-8);
  s.at_most("energy_equals_phi", rel(res.initial_energy, problem.energy), 1e-10);
}

void ripening_suite(CheckReport& rep, const RunConfig& cfg, const FreeEnergyModel& model) {
  Suite s(rep, "ripening");
  if (model.undercooling_vanishes()) {
    rep.warnings.push_back("ripening suite skipped: the reduced model needs gamma > 0");
    return;
  }
  const auto pts = find_equilibria(cfg.equilibrium_problem());
  if (pts.empty()) {
    s.expect("equilibrium_available", false, "no equilibrium at this energy");
    return;
  }
  const auto& p = pts.front();
  const int m = cfg.problem.spheres;
  MultiSphereConfig mc(model);
  mc.domain = cfg.domain;
  mc.sigma = cfg.problem.sigma;
  mc.radii.assign(m, p.radius);
  mc.u0 = p.u;
  MultiSphere ms(mc);
  const auto st = ms.initial_state();
  double vmax = 0.0;
  for (double v : ms.reduced_rhs(st)) vmax = std::max(vmax, std::abs(v));
  s.at_most("equal_radii_stationary", vmax, 1e-8);
  if (m >= 2) {
    auto pert = st;
    pert.radii[0] *= 1.001;
    pert.radii[1] *= 0.999;
    const auto v = ms.reduced_rhs(pert);
    s.expect("larger_grows_smaller_shrinks", v[0] > 0.0 && v[1] < 0.0);
  }
  const auto eig = ms.jacobian_eigenvalues(st);
  const double tol = 1e-6 * std::max(1.0, std::abs(eig.front()));
  int positive = 0;
  for (double e : eig) positive += e > tol;
  const int predicted = p.zeta > 1.0 ? m : m - 1;
  s.expect("jacobian_positive_count", positive == predicted,
           "positive " + std::to_string(positive) + ", predicted " + std::to_string(predicted));
}

}  // namespace

CheckReport run_check_suite(const RunConfig& cfg, int jobs) {
  CheckReport rep;
  std::vector<std::string> suites = cfg.check ? cfg.check->suites : std::vector<std::string>{};
  if (suites.empty()) {
    rep.warnings.push_back("no check suites requested; nothing to do");
    return rep;
  }
  const auto model = cfg.material.build();
  try {
    model.validate();
    rep.items.push_back({"thermo", "model_valid", true, 0.0, 0.0, ""});
  } catch (const Error& e) {
    rep.items.push_back({"thermo", "model_valid", false, 1.0, 0.0, e.what()});
    return rep;
  }
  for (const auto& name : suites) {
    try {
      if (name == "thermo") thermo_suite(rep, model, cfg.seed);
      else if (name == "equilibria") equilibria_suite(rep, cfg);
      else if (name == "geometry") geometry_suite(rep, cfg.domain.n);
      else if (name == "spectral") spectral_suite(rep, cfg, model, jobs);
      else if (name == "simulate") simulate_suite(rep, cfg, model);
      else if (name == "ripening") ripening_suite(rep, cfg, model);
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      rep.items.push_back({name, "completed", false, 1.0, 0.0, e.what()});
    }
  }
  return rep;
}

}  // namespace stefan
