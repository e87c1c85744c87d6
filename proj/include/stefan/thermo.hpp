#pragma once

// Two-phase material laws. Phase 1 is the dispersed phase enclosed by the
// interface, phase 2 the connected outer phase; jumps are [[v]] = v2 - v1.
// All quantities are nondimensional.

#include <functional>
#include <string>
#include <vector>

namespace stefan {

enum class Phase { Inner = 1, Outer = 2 };

enum class EnergyFamily { EqualHeatCapacity, LinearInternalEnergy, Custom };

std::string to_string(EnergyFamily family);

// Free energy of one phase with its first two derivatives.
struct PhaseLaw {
  std::function<double(double)> psi;
  std::function<double(double)> dpsi;
  std::function<double(double)> d2psi;
};

struct DerivedQuantities {
  double eta;    // entropy, -psi'
  double eps;    // internal energy, psi - u psi'
  double kappa;  // heat capacity, -u psi''
};

struct MeltingPoints {
  std::vector<double> roots;
  bool unique;
};

// Parameters for the two analytic families, psi_i(u) = a_i + b_i u - kappa_i u ln u.
struct AnalyticParams {
  double a1 = 0, b1 = 0, a2 = 0, b2 = 0;
  double kappa1 = 1, kappa2 = 1;
};

class FreeEnergyModel {
 public:
  static FreeEnergyModel equal_heat_capacity(double a1, double b1, double a2, double b2,
                                             double kappa);
  static FreeEnergyModel linear_internal_energy(double a1, double b1, double kappa1, double a2,
                                                double b2, double kappa2);
  static FreeEnergyModel custom(PhaseLaw inner, PhaseLaw outer);

  FreeEnergyModel& with_conductivity(double d1, double d2);
  FreeEnergyModel& with_conductivity(std::function<double(double)> d1,
                                     std::function<double(double)> d2);
  FreeEnergyModel& with_undercooling(double gamma);
  FreeEnergyModel& with_undercooling(std::function<double(double)> gamma, bool vanishes);
  FreeEnergyModel& with_interval(double u_lo, double u_hi);

  EnergyFamily family() const { return family_; }
  const AnalyticParams& params() const { return params_; }
  double u_lo() const { return u_lo_; }
  double u_hi() const { return u_hi_; }
  bool admissible(double u) const { return u >= u_lo_ && u <= u_hi_; }

  double psi(Phase phase, double u) const;
  double dpsi(Phase phase, double u) const;
  double d2psi(Phase phase, double u) const;
  DerivedQuantities derived(Phase phase, double u) const;
  double eps(Phase phase, double u) const { return derived(phase, u).eps; }
  double eta(Phase phase, double u) const { return -dpsi(phase, u); }
  double kappa(Phase phase, double u) const { return -u * d2psi(phase, u); }

  double jump_h(double u) const;
  double jump_h_prime(double u) const;
  double latent_l(double u) const;
  double jump_eps(double u) const;
  double jump_kappa(double u) const;

  double conductivity(Phase phase, double u) const;
  double undercooling(double u) const;
  bool undercooling_vanishes() const { return gamma_zero_; }
  // Constant values used to build the model, when it was built from constants.
  double d1_const() const { return d1_const_; }
  double d2_const() const { return d2_const_; }
  double gamma_const() const { return gamma_const_; }

  MeltingPoints melting_temperature() const;

  // Throws InvalidModel when kappa_i <= 0, d_i <= 0 or gamma violates its regime
  // anywhere on a 1000-point sample of the admissible interval.
  void validate() const;

 private:
  FreeEnergyModel() = default;
  void check_domain(double u) const;
  const PhaseLaw& law(Phase phase) const { return phase == Phase::Inner ? inner_ : outer_; }

  EnergyFamily family_ = EnergyFamily::Custom;
  AnalyticParams params_;
  PhaseLaw inner_, outer_;
  std::function<double(double)> d1_, d2_, gamma_;
  double d1_const_ = 1, d2_const_ = 1, gamma_const_ = 0;
  bool gamma_zero_ = true;
  double u_lo_ = 1e-3, u_hi_ = 1e3;
};

}  // namespace stefan
