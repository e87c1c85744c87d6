#pragma once

// Equilibria of the spherical reduced problem: constant temperature u and m
// disjoint spheres of radius R = sigma / h(u), closed by energy conservation.

#include "stefan/thermo.hpp"

#include <string>
#include <vector>

namespace stefan {

// Surface measure of the unit sphere in R^n (2 pi for n = 2, 4 pi for n = 3).
double unit_sphere_measure(int n);

struct DomainSpec {
  int n = 2;
  double volume = 0.0;
  // packing_radii[m-1] is R_m(m); missing entries use the default guard.
  std::vector<double> packing_radii;

  double omega() const { return unit_sphere_measure(n); }
  double packing_radius(int m) const;
  double default_packing_radius(int m) const;
  void validate() const;
};

struct EquilibriumProblem {
  FreeEnergyModel model;
  DomainSpec domain;
  double sigma = 1.0;
  int m = 1;
  double energy = 0.0;
};

enum class StabilityClass { Stable, Unstable, Marginal };

std::string to_string(StabilityClass c);

struct EquilibriumPoint {
  double u;
  double radius;
  double zeta;
  double phi_prime;
  bool feasible;
  StabilityClass stability;
};

struct TemperatureInterval {
  double lo;
  double hi;
};

// phi(u) = E(u, R(u)) for fixed material, domain, sigma and sphere count.
class ReducedEnergy {
 public:
  ReducedEnergy(FreeEnergyModel model, DomainSpec domain, double sigma, int m);

  const FreeEnergyModel& model() const { return model_; }
  const DomainSpec& domain() const { return domain_; }
  double sigma() const { return sigma_; }
  int sphere_count() const { return m_; }
  double packing_radius() const { return r_max_; }

  // R(u) = sigma / h(u); throws NoAdmissibleRadius when h(u) <= 0.
  double radius(double u) const;
  bool admissible(double u) const;

  double phi(double u) const;
  double phi_hform(double u) const;
  double phi_prime(double u) const;
  // Throws DegenerateLatentHeat when l(u) = 0.
  double zeta(double u) const;

  double interface_area(double u) const;          // |Gamma| = m omega_n R^{n-1}
  double heat_capacity_integral(double u) const;  // (kappa(u)|1)_Omega
  // Closed form of phi' expressed through zeta: (zeta - 1) l^2 R^2 |Gamma| / (sigma u).
  double phi_prime_from_zeta(double u) const;

  // Connected components of {u : h(u) > sigma / R_m} inside the model interval,
  // shrunk by 1e-9 relative.
  std::vector<TemperatureInterval> admissible_intervals() const;

  // Minimizer of phi on [lo, hi] by golden-section search.
  double argmin(double lo, double hi) const;

 private:
  void require_admissible(double u) const;

  FreeEnergyModel model_;
  DomainSpec domain_;
  double sigma_;
  int m_;
  double r_max_;
};

StabilityClass classify(int m, double zeta);

EquilibriumPoint make_equilibrium_point(const ReducedEnergy& phi, double u);

// All roots of phi(u) = E0 on the admissible set, ordered by u.
std::vector<EquilibriumPoint> find_equilibria(const EquilibriumProblem& problem);

// Sampling of phi on the admissible set for plotting: rows (u, phi, phi', zeta).
struct PhiSample {
  double u, phi, phi_prime, zeta;
};
std::vector<PhiSample> sample_phi(const ReducedEnergy& phi, int samples_per_interval);

}  // namespace stefan
