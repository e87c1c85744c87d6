#include "stefan/thermo.hpp"

#include "stefan/error.hpp"
#include "stefan/roots.hpp"

#include <cmath>
#include <sstream>

namespace stefan {

namespace {

PhaseLaw log_law(double a, double b, double kappa) {
  return PhaseLaw{
      [=](double u) { return a + b * u - kappa * u * std::log(u); },
      [=](double u) { return b - kappa * (std::log(u) + 1.0); },
      [=](double u) { return -kappa / u; },
  };
}

std::function<double(double)> constant(double c) {
  return [c](double) { return c; };
}

}  // namespace

std::string to_string(EnergyFamily family) {
  switch (family) {
    case EnergyFamily::EqualHeatCapacity: return "equal_heat_capacity";
    case EnergyFamily::LinearInternalEnergy: return "linear_internal_energy";
    case EnergyFamily::Custom: return "custom";
  }
  return "custom";
}

FreeEnergyModel FreeEnergyModel::equal_heat_capacity(double a1, double b1, double a2, double b2,
                                                     double kappa) {
  FreeEnergyModel m = linear_internal_energy(a1, b1, kappa, a2, b2, kappa);
  m.family_ = EnergyFamily::EqualHeatCapacity;
  return m;
}

FreeEnergyModel FreeEnergyModel::linear_internal_energy(double a1, double b1, double kappa1,
                                                        double a2, double b2, double kappa2) {
  FreeEnergyModel m;
  m.family_ = EnergyFamily::LinearInternalEnergy;
  m.params_ = AnalyticParams{a1, b1, a2, b2, kappa1, kappa2};
  m.inner_ = log_law(a1, b1, kappa1);
  m.outer_ = log_law(a2, b2, kappa2);
  m.with_conductivity(1.0, 1.0);
  m.with_undercooling(0.0);
  return m;
}

FreeEnergyModel FreeEnergyModel::custom(PhaseLaw inner, PhaseLaw outer) {
  if (!inner.psi || !inner.dpsi || !inner.d2psi || !outer.psi || !outer.dpsi || !outer.d2psi) {
    throw Error(ErrorCode::InvalidModel,
                "custom free energies must supply psi, psi' and psi'' for both phases");
  }
  FreeEnergyModel m;
  m.family_ = EnergyFamily::Custom;
  m.inner_ = std::move(inner);
  m.outer_ = std::move(outer);
  m.with_conductivity(1.0, 1.0);
  m.with_undercooling(0.0);
  return m;
}

FreeEnergyModel& FreeEnergyModel::with_conductivity(double d1, double d2) {
  d1_const_ = d1;
  d2_const_ = d2;
  d1_ = constant(d1);
  d2_ = constant(d2);
  return *this;
}

FreeEnergyModel& FreeEnergyModel::with_conductivity(std::function<double(double)> d1,
                                                    std::function<double(double)> d2) {
  d1_ = std::move(d1);
  d2_ = std::move(d2);
  return *this;
}

FreeEnergyModel& FreeEnergyModel::with_undercooling(double gamma) {
  gamma_const_ = gamma;
  gamma_ = constant(gamma);
  gamma_zero_ = gamma == 0.0;
  return *this;
}

FreeEnergyModel& FreeEnergyModel::with_undercooling(std::function<double(double)> gamma,
                                                    bool vanishes) {
  gamma_ = std::move(gamma);
  gamma_zero_ = vanishes;
  return *this;
}

FreeEnergyModel& FreeEnergyModel::with_interval(double u_lo, double u_hi) {
  if (!(u_lo > 0.0) || !(u_hi > u_lo) || !std::isfinite(u_hi)) {
    throw Error(ErrorCode::InvalidModel, "admissible interval must satisfy 0 < u_lo < u_hi < inf");
  }
  u_lo_ = u_lo;
  u_hi_ = u_hi;
  return *this;
}

void FreeEnergyModel::check_domain(double u) const {
  if (!(u >= u_lo_ && u <= u_hi_)) {
    std::ostringstream os;
    os << "temperature " << u << " outside admissible interval [" << u_lo_ << ", " << u_hi_
       << "]";
    throw Error(ErrorCode::Domain, os.str());
  }
}

double FreeEnergyModel::psi(Phase phase, double u) const {
  check_domain(u);
  return law(phase).psi(u);
}

double FreeEnergyModel::dpsi(Phase phase, double u) const {
  check_domain(u);
  return law(phase).dpsi(u);
}

double FreeEnergyModel::d2psi(Phase phase, double u) const {
  check_domain(u);
  return law(phase).d2psi(u);
}

DerivedQuantities FreeEnergyModel::derived(Phase phase, double u) const {
  check_domain(u);
  const auto& p = law(phase);
  const double psi_v = p.psi(u);
  const double eta = -p.dpsi(u);
  return DerivedQuantities{eta, psi_v + u * eta, -u * p.d2psi(u)};
}

double FreeEnergyModel::jump_h(double u) const {
  return psi(Phase::Outer, u) - psi(Phase::Inner, u);
}

double FreeEnergyModel::jump_h_prime(double u) const {
  return dpsi(Phase::Outer, u) - dpsi(Phase::Inner, u);
}

double FreeEnergyModel::latent_l(double u) const { return u * jump_h_prime(u); }

double FreeEnergyModel::jump_eps(double u) const {
  return eps(Phase::Outer, u) - eps(Phase::Inner, u);
}

double FreeEnergyModel::jump_kappa(double u) const {
  return kappa(Phase::Outer, u) - kappa(Phase::Inner, u);
}

double FreeEnergyModel::conductivity(Phase phase, double u) const {
  check_domain(u);
  return phase == Phase::Inner ? d1_(u) : d2_(u);
}

double FreeEnergyModel::undercooling(double u) const {
  check_domain(u);
  return gamma_(u);
}

MeltingPoints FreeEnergyModel::melting_temperature() const {
  auto h = [this](double u) { return jump_h(u); };
  auto found = roots::scan_roots(h, u_lo_, u_hi_, 512, 1e-12);
  if (found.empty()) {
    throw Error(ErrorCode::NoMeltingPoint, "free-energy jump has no sign change on the interval");
  }
  return MeltingPoints{found, found.size() == 1};
}

void FreeEnergyModel::validate() const {
  const auto grid = roots::sample_grid(u_lo_, u_hi_, 999);
  for (double u : grid) {
    for (Phase ph : {Phase::Inner, Phase::Outer}) {
      const double k = kappa(ph, u);
      if (!(k > 0.0) || !std::isfinite(k)) {
        std::ostringstream os;
        os << "heat capacity kappa" << static_cast<int>(ph) << "(" << u << ") = " << k
           << " must be positive";
        throw Error(ErrorCode::InvalidModel, os.str());
      }
      const double d = conductivity(ph, u);
      if (!(d > 0.0) || !std::isfinite(d)) {
        std::ostringstream os;
        os << "conductivity d" << static_cast<int>(ph) << "(" << u << ") = " << d
           << " must be positive";
        throw Error(ErrorCode::InvalidModel, os.str());
      }
    }
    const double g = undercooling(u);
    if (gamma_zero_ ? g != 0.0 : !(g > 0.0)) {
      std::ostringstream os;
      os << "undercooling gamma(" << u << ") = " << g
         << " must vanish identically or be positive on the whole interval";
      throw Error(ErrorCode::InvalidModel, os.str());
    }
  }
}

}  // namespace stefan
