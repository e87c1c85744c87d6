#include "stefan/tasks.hpp"

#include "stefan/equilibria.hpp"
#include "stefan/simulate.hpp"
#include "stefan/spectral.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace stefan {

namespace {

Json number_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json point_json(const EquilibriumPoint& p) {
  Json j;
  j["u"] = p.u;
  j["radius"] = p.radius;
  j["zeta"] = number_or_null(p.zeta);
  j["phi_prime"] = p.phi_prime;
  j["feasible"] = p.feasible;
  j["class"] = to_string(p.stability);
  return j;
}

Json model_json(const MaterialSection& m) {
  Json j;
  j["family"] = to_string(m.family);
  j["kappa1"] = m.kappa1;
  j["kappa2"] = m.kappa2;
  j["d1"] = m.d1;
  j["d2"] = m.d2;
  j["gamma"] = m.gamma;
  return j;
}

}  // namespace

TaskOutput run_equilibria_task(const RunConfig& cfg) {
  const auto problem = cfg.equilibrium_problem();
  problem.model.validate();
  const int samples = cfg.equilibria ? cfg.equilibria->samples : 200;
  ReducedEnergy phi(problem.model, problem.domain, problem.sigma, problem.m);

  TaskOutput out;
  auto& j = out.summary;
  j["task"] = "equilibria";
  j["model"] = model_json(cfg.material);
  j["sigma"] = problem.sigma;
  j["spheres"] = problem.m;
  j["energy"] = problem.energy;
  j["packing_radius"] = phi.packing_radius();
  const auto melt = problem.model.melting_temperature();
  j["melting_temperatures"] = melt.roots;
  j["melting_unique"] = melt.unique;

  Json intervals = Json::array();
  double phi_min = std::numeric_limits<double>::infinity();
  for (const auto& iv : phi.admissible_intervals()) {
    const double um = phi.argmin(iv.lo, iv.hi);
    phi_min = std::min(phi_min, phi.phi(um));
    intervals.push_back({{"lo", iv.lo}, {"hi", iv.hi}, {"argmin", um}, {"phi_min", phi.phi(um)}});
  }
  j["admissible_intervals"] = intervals;
  j["phi_min"] = number_or_null(phi_min);

  const auto points = find_equilibria(problem);
  Json roots = Json::array();
  for (const auto& p : points) roots.push_back(point_json(p));
  j["count"] = points.size();
  j["equilibria"] = roots;

  CsvTable t{{"u", "phi", "phi_prime", "zeta"}, {}};
  for (const auto& s : sample_phi(phi, samples)) t.add({s.u, s.phi, s.phi_prime, s.zeta});
  out.tables.emplace_back("phi.csv", std::move(t));
  return out;
}

TaskOutput run_spectrum_task(const RunConfig& cfg, int jobs) {
  if (!cfg.spectrum) throw ConfigError({"spectrum: section is missing"});
  const auto& task = *cfg.spectrum;
  const auto model = cfg.material.build();
  model.validate();
  const int n = cfg.domain.n;
  const double sigma = cfg.problem.sigma;
  const double u = task.temperature;

  TaskOutput out;
  auto& j = out.summary;
  j["task"] = "spectrum";
  j["model"] = model_json(cfg.material);
  j["temperature"] = u;
  j["sigma"] = sigma;

  if (task.concentric) {
    const auto& c = *task.concentric;
    auto sc = SpectralConfig::from_equilibrium(model, n, sigma, u, cfg.outer_radius());
    sc.max_mode = c.max_mode;
    sc.lambda_min = c.lambda_min;
    sc.lambda_max = c.lambda_max;
    sc.points_per_decade = c.points_per_decade;
    sc.radial_nodes = c.radial_nodes;
    sc.jobs = jobs;
    const auto res = count_positive_eigenvalues(sc, true);

    Json cj;
    cj["n"] = n;
    cj["inner_radius"] = sc.inner_radius;
    cj["outer_radius"] = sc.outer_radius;
    cj["latent"] = sc.latent;
    cj["zeta"] = number_or_null(res.zeta);
    cj["lambda_max"] = res.lambda_max;
    cj["positive_count"] = res.positive_count;
    cj["predicted_positive_count"] = res.zeta > 1.0 ? 1 : 0;
    cj["kernel_dimension"] = res.kernel_dimension;
    cj["expected_kernel_dimension"] = n + 1;
    cj["suspect_count"] = res.suspect_count;
    cj["cutoff_mode"] = res.cutoff_mode;
    cj["determinant_scale"] = sc.determinant_scale();
    Json modes = Json::array();
    Json eigenvalues = Json::array();
    CsvTable t{{"mode", "lambda", "determinant"}, {}};
    for (const auto& m : res.modes) {
      Json mj;
      mj["mode"] = m.mode;
      mj["multiplicity"] = m.multiplicity;
      mj["a_mode"] = m.a_mode;
      mj["d_near_zero"] = m.d_near_zero;
      mj["kernel"] = m.kernel;
      mj["sign_stable"] = m.sign_stable;
      Json rj = Json::array();
      for (const auto& r : m.roots) {
        rj.push_back({{"lambda", r.lambda}, {"lo", r.lo}, {"hi", r.hi}, {"d_lo", r.d_lo}, {"d_hi", r.d_hi}});
        eigenvalues.push_back({{"mode", m.mode}, {"lambda", r.lambda}, {"multiplicity", m.multiplicity}});
      }
      mj["roots"] = rj;
      mj["suspects"] = m.suspects;
      modes.push_back(mj);
      for (std::size_t i = 0; i < m.lambdas.size(); ++i) {
        t.add({static_cast<double>(m.mode), m.lambdas[i], m.values[i]});
      }
    }
    cj["positive_eigenvalues"] = eigenvalues;
    cj["modes"] = modes;
    j["concentric"] = cj;
    out.tables.emplace_back("dispersion.csv", std::move(t));
  }

  if (task.multidisc) {
    if (n != 2) throw ConfigError({"spectrum.multidisc: requires domain.n = 2"});
    const auto& c = *task.multidisc;
    MultiDiscConfig mc;
    mc.width = c.width;
    mc.height = c.height;
    mc.centers = c.centers;
    mc.radius = sigma / model.jump_h(u);
    mc.grid = c.grid;
    mc.quadrature = c.quadrature;
    mc.subsample = c.subsample;
    mc.u = u;
    mc.kappa1 = model.kappa(Phase::Inner, u);
    mc.kappa2 = model.kappa(Phase::Outer, u);
    mc.d1 = model.conductivity(Phase::Inner, u);
    mc.d2 = model.conductivity(Phase::Outer, u);
    mc.latent = model.latent_l(u);
    mc.gamma = model.undercooling(u);
    mc.sigma = sigma;
    mc.lambda_min = c.lambda_min;
    mc.lambda_max = c.lambda_max;
    mc.points_per_decade = c.points_per_decade;
    mc.validate();
    const auto scan = scan_b_lambda(mc);
    const int m = static_cast<int>(mc.centers.size());
    const double zeta = mc.zeta();

    Json mj;
    mj["discs"] = m;
    mj["radius"] = mc.radius;
    mj["zeta"] = zeta;
    mj["crossings"] = scan.crossings;
    mj["predicted_crossings"] = zeta > 1.0 ? m : m - 1;
    mj["lambda_max"] = scan.lambda_max;
    mj["negative_count_at_lambda_min"] = scan.negative_counts.empty() ? 0 : scan.negative_counts.front();
    j["multidisc"] = mj;
    CsvTable t{{"lambda", "smallest_eigenvalue", "negative_count"}, {}};
    for (std::size_t i = 0; i < scan.lambdas.size(); ++i) {
      t.add({scan.lambdas[i], scan.smallest[i], static_cast<double>(scan.negative_counts[i])});
    }
    out.tables.emplace_back("b_lambda.csv", std::move(t));
  }
  return out;
}

std::optional<FrontLimit> stable_front_limit(const FreeEnergyModel& model, int n, double r_out, double sigma,
                                             double energy) {
  DomainSpec d;
  d.n = n;
  d.volume = unit_sphere_measure(n) * std::pow(r_out, n) / n;
  d.packing_radii = {r_out};
  EquilibriumProblem p{model, d, sigma, 1, energy};
  std::optional<FrontLimit> best;
  for (const auto& pt : find_equilibria(p)) {
    if (pt.stability == StabilityClass::Stable && pt.feasible) {
      best = FrontLimit{pt.u, pt.radius, pt.zeta};
    }
  }
  return best;
}

TaskOutput run_simulate_task(const RunConfig& cfg) {
  if (!cfg.simulate) throw ConfigError({"simulate: section is missing"});
  const auto& task = *cfg.simulate;
  const auto model = cfg.material.build();
  model.validate();
  RadialStefanConfig rc(model);
  rc.sigma = cfg.problem.sigma;
  rc.n = cfg.domain.n;
  rc.outer_radius = cfg.outer_radius();
  rc.s0 = task.s0;
  if (task.jitter > 0.0) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    rc.s0 *= 1.0 + task.jitter * dist(rng);
  }
  rc.u_bulk = task.u_bulk;
  rc.target_energy = task.energy;
  rc.bump_width = task.bump_width;
  rc.inner_cells = task.inner_cells;
  rc.outer_cells = task.outer_cells;
  rc.cfl = task.cfl;
  rc.dt_min = task.dt_min;
  rc.dt_max = task.dt_max;
  rc.dt_initial = task.dt_initial;
  rc.t_end = task.t_end;
  rc.max_steps = task.max_steps;
  rc.bound = task.bound;
  rc.record_every = task.record_every;

  RadialStefan sim(rc);
  const auto res = sim.run();

  TaskOutput out;
  out.stop_code = res.stop_code;
  auto& j = out.summary;
  j["task"] = "simulate";
  j["model"] = model_json(cfg.material);
  j["n"] = rc.n;
  j["outer_radius"] = rc.outer_radius;
  j["s0"] = rc.s0;
  j["stop_reason"] = res.stop_reason;
  j["steps"] = res.steps;
  const auto& fs = res.final_state;
  j["final_state"] = {{"t", fs.t}, {"s", fs.s}, {"v", fs.v}, {"u_interface", fs.u_s}};
  j["diagnostics"] = {{"initial_energy", res.initial_energy},
                      {"max_relative_energy_drift", res.max_energy_drift},
                      {"min_entropy_increment", res.min_entropy_increment},
                      {"max_constraint_residual", res.max_constraint_residual},
                      {"compatibility_residual", res.compatibility_residual}};
  j["bounds"] = {{"bounded", res.flags.bounded},
                 {"latent_nondegenerate", res.flags.latent_nondegenerate},
                 {"temperature_positive", res.flags.temperature_positive},
                 {"ball_condition", res.flags.ball_condition}};

  Json fit = nullptr;
  if (const auto lim = stable_front_limit(model, rc.n, rc.outer_radius, rc.sigma, res.initial_energy)) {
    const double t_half = 0.5 * fs.t;
    const auto f = fit_front_decay(res.series, lim->radius, t_half);
    fit = {{"s_equilibrium", lim->radius},
           {"u_equilibrium", lim->u},
           {"zeta", lim->zeta},
           {"fit_from", t_half},
           {"slope", f.slope},
           {"r_squared", f.r_squared},
           {"points", f.points},
           {"final_s_relative_error", std::abs(fs.s - lim->radius) / lim->radius},
           {"final_u_relative_error", std::abs(fs.u_s - lim->u) / lim->u}};
  }
  j["convergence"] = fit;

  CsvTable t{{"t", "s", "u_interface", "E", "Phi", "production", "clearance"}, {}};
  for (const auto& p : res.series) t.add({p.t, p.s, p.u_s, p.energy, p.entropy, p.production, p.clearance});
  out.tables.emplace_back("simulate.csv", std::move(t));
  return out;
}

TaskOutput run_ripening_task(const RunConfig& cfg) {
  if (!cfg.ripening) throw ConfigError({"ripening: section is missing"});
  const auto& task = *cfg.ripening;
  const auto model = cfg.material.build();
  MultiSphereConfig mc(model);
  mc.domain = cfg.domain;
  mc.sigma = cfg.problem.sigma;
  mc.radii = task.radii;
  mc.jitter = task.jitter;
  mc.seed = cfg.seed;
  mc.u0 = task.temperature;
  mc.target_energy = task.energy;
  mc.dt = task.dt;
  mc.t_end = task.t_end;
  mc.collapse_radius = task.collapse_radius;
  mc.record_every = task.record_every;

  MultiSphere sim(mc);
  const auto st0 = sim.initial_state();
  const auto eig = sim.jacobian_eigenvalues(st0);
  const auto res = sim.run();

  TaskOutput out;
  out.stop_code = res.stop_code;
  auto& j = out.summary;
  j["task"] = "ripening";
  j["approximation"] = "spatially uniform temperature closed by energy conservation; not the full PDE";
  j["model"] = model_json(cfg.material);
  j["spheres"] = task.radii.size();
  j["initial_radii"] = st0.radii;
  j["energy"] = st0.energy;
  j["initial_jacobian_eigenvalues"] = eig;
  int positive = 0;
  for (double e : eig) positive += e > 0.0;
  j["initial_positive_eigenvalues"] = positive;
  j["stop_reason"] = res.stop_reason;
  j["steps"] = res.steps;
  j["final_state"] = {{"t", res.final_state.t}, {"u", res.final_state.u}, {"radii", res.final_state.radii}};
  j["diagnostics"] = {{"max_relative_energy_drift", res.max_energy_drift},
                      {"min_entropy_increment", res.min_entropy_increment}};

  CsvTable t;
  t.columns.push_back("t");
  for (std::size_t i = 0; i < task.radii.size(); ++i) t.columns.push_back("R_" + std::to_string(i + 1));
  for (const char* c : {"u_interface", "E", "Phi", "production", "clearance"}) t.columns.push_back(c);
  for (const auto& p : res.series) {
    std::vector<double> row{p.t};
    row.insert(row.end(), p.radii.begin(), p.radii.end());
    row.insert(row.end(), {p.u, p.energy, p.entropy, p.production, p.clearance});
    t.add(std::move(row));
  }
  out.tables.emplace_back("ripening.csv", std::move(t));
  return out;
}

}  // namespace stefan
