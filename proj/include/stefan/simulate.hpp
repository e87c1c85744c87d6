#pragma once

// Time evolution.
//
// RadialStefan: the radially symmetric two-phase problem with a sharp front
// at r = s(t). Each phase carries a uniform cell grid in the mapped
// coordinate (r = s xi inside, r = s + (R_out - s) xi outside) that moves with
// the front. A step remaps cell energies onto the new grid, solves implicit
// diffusion with the interface temperature from the Gibbs-Thomson row, and
// places the front so that total energy (bulk plus surface) is unchanged.
//
// MultiSphere: m spheres sharing one spatially uniform temperature, closed by
// exact energy conservation, with kinetic undercooling driving each radius.
// This is an approximation used to exhibit ripening, not the full PDE.

#include "stefan/equilibria.hpp"
#include "stefan/error.hpp"
#include "stefan/thermo.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace stefan {

struct RadialStefanConfig {
  explicit RadialStefanConfig(FreeEnergyModel m) : model(std::move(m)) {}

  FreeEnergyModel model;
  double sigma = 1.0;
  int n = 2;
  double outer_radius = 3.0;
  double s0 = 1.0;
  // Initial temperature. When empty, u_bulk with a Gaussian adjustment of
  // width `bump_width` near s0 that meets the interface condition.
  std::function<double(double)> initial_profile;
  double u_bulk = 1.0;
  double bump_width = 0.25;
  std::optional<double> target_energy;  // adjust u_bulk to hit E0
  int inner_cells = 200;
  int outer_cells = 200;
  double cfl = 0.2;
  double dt_min = 1e-10;
  double dt_max = 1e-2;
  double dt_initial = 1e-4;
  bool fixed_dt = false;  // use dt_max for every step
  double t_end = 1.0;
  long max_steps = 10000000;
  double front_floor = 0.0;  // epsilon_s; 0 selects 1e-3 R_out
  double bound = 1e6;        // M in the monitored bounds |u| <= M, u >= 1/M, |l(u_s)| >= 1/M
  int record_every = 1;

  void validate() const;
  double floor() const { return front_floor > 0.0 ? front_floor : 1e-3 * outer_radius; }
};

struct RadialState {
  double t = 0.0;
  double s = 1.0;
  double v = 0.0;    // ds/dt
  double u_s = 1.0;  // interface temperature
  std::vector<double> u_inner;  // cell averages, r = s xi
  std::vector<double> u_outer;  // cell averages, r = s + (R_out - s) xi
};

struct RadialSample {
  double t, s, u_s, energy, entropy, production, clearance, dt;
};

struct BoundFlags {
  bool bounded = true;            // sup |u| <= M
  bool latent_nondegenerate = true;  // |l(u_s)| >= 1/M
  bool temperature_positive = true;  // u >= 1/M
  bool ball_condition = true;        // eps_s <= s <= R_out - eps_s
};

struct RadialRunResult {
  std::vector<RadialSample> series;
  RadialState final_state;
  std::string stop_reason;  // "t_end", "max_steps" or an error name
  std::optional<ErrorCode> stop_code;
  BoundFlags flags;
  double initial_energy = 0.0;
  double max_energy_drift = 0.0;     // relative
  double min_entropy_increment = 0.0;
  double max_constraint_residual = 0.0;  // |h(u_s) - sigma/s - gamma V|
  double compatibility_residual = 0.0;   // at t = 0
  long steps = 0;
};

// Least-squares line through log|s(t) - s_inf| for samples with t >= t_from.
struct DecayFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  int points = 0;
};
DecayFit fit_front_decay(const std::vector<RadialSample>& series, double s_inf, double t_from);

class RadialStefan {
 public:
  explicit RadialStefan(RadialStefanConfig cfg);

  const RadialStefanConfig& config() const { return cfg_; }
  const RadialState& state() const { return state_; }
  void set_state(RadialState s);

  RadialState initial_state() const;

  double energy(const RadialState& s) const;
  double entropy(const RadialState& s) const;
  double entropy_production(const RadialState& s) const;
  double clearance(const RadialState& s) const;

  // Advances by dt (the front may adjust within the step). Throws
  // WellPosednessLost, TemperaturePositivityLost or GeometryEvent.
  void step(double dt);
  // Suggested next step from the front CFL condition.
  double suggest_dt(double previous) const;

  RadialRunResult run();

  // Interface temperature for a given front position and velocity.
  double interface_temperature(double s, double v, double guess) const;

 private:
  struct Geometry {
    std::vector<double> edges_inner, edges_outer;
  };
  Geometry geometry(double s) const;
  double shell(double a, double b) const;  // volume between radii a < b
  double area(double r) const;
  double surface_energy(double s) const;
  double front_limit() const;  // largest dt allowed by the front motion
  // Diffusion step on fixed geometry with Dirichlet interface temperature;
  // returns the cell temperatures. `content` is cell energy after remap.
  std::vector<double> diffuse(const std::vector<double>& edges, const std::vector<double>& content,
                              const std::vector<double>& guess, const std::vector<double>& d_face,
                              Phase phase, double u_s, double dt) const;
  struct Trial {
    RadialState state;
    double residual;
  };
  Trial trial(double s_new, double dt) const;
  void check_state(const RadialState& st) const;

  RadialStefanConfig cfg_;
  double omega_;
  RadialState state_;
};

struct MultiSphereConfig {
  explicit MultiSphereConfig(FreeEnergyModel m) : model(std::move(m)) {}

  FreeEnergyModel model;
  DomainSpec domain;
  double sigma = 1.0;
  std::vector<double> radii;  // initial radii
  double jitter = 0.0;        // relative random perturbation of the initial radii
  std::uint64_t seed = 0;
  std::optional<double> target_energy;  // default: energy at u0
  double u0 = 1.0;
  double dt = 1e-3;
  double t_end = 1.0;
  double collapse_radius = 1e-3;
  int record_every = 1;

  void validate() const;
};

struct MultiSphereState {
  double t = 0.0;
  double u = 1.0;
  std::vector<double> radii;
  double energy = 0.0;  // E0
};

struct MultiSphereSample {
  double t;
  std::vector<double> radii;
  double u, energy, entropy, production, clearance;
};

struct MultiSphereRunResult {
  std::vector<MultiSphereSample> series;
  MultiSphereState final_state;
  std::string stop_reason;
  std::optional<ErrorCode> stop_code;
  double max_energy_drift = 0.0;
  double min_entropy_increment = 0.0;
  long steps = 0;
};

class MultiSphere {
 public:
  explicit MultiSphere(MultiSphereConfig cfg);

  const MultiSphereConfig& config() const { return cfg_; }
  MultiSphereState initial_state() const;

  double energy(double u, const std::vector<double>& radii) const;
  double entropy(double u, const std::vector<double>& radii) const;
  // u with E(u, radii) = E0; throws EnergyClosureFailed.
  double close_energy(const std::vector<double>& radii, double e0, double guess) const;
  // V_i = (h(u) - sigma / R_i) / gamma(u) with u recovered from E0.
  std::vector<double> reduced_rhs(const MultiSphereState& st) const;
  double production(const MultiSphereState& st) const;
  // Jacobian of the radii rates by central differences, with u re-solved.
  Eigen::MatrixXd jacobian(const MultiSphereState& st, double rel_step = 1e-6) const;
  // Real parts of the Jacobian eigenvalues, ascending.
  std::vector<double> jacobian_eigenvalues(const MultiSphereState& st) const;

  MultiSphereRunResult run();

 private:
  MultiSphereConfig cfg_;
};

}  // namespace stefan
