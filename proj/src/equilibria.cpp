#include "stefan/equilibria.hpp"

#include "stefan/error.hpp"
#include "stefan/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace stefan {

namespace {

constexpr double kShrink = 1e-9;
constexpr double kMarginalBand = 1e-9;
constexpr int kScanSamples = 4096;

}  // namespace

double unit_sphere_measure(int n) {
  switch (n) {
    case 2: return 2.0 * std::numbers::pi;
    case 3: return 4.0 * std::numbers::pi;
    default:
      throw Error(ErrorCode::Config, "spatial dimension must be 2 or 3");
  }
}

double DomainSpec::default_packing_radius(int m) const {
  return 0.5 * std::pow(volume * n / (omega() * m), 1.0 / n);
}

double DomainSpec::packing_radius(int m) const {
  if (m < 1) throw Error(ErrorCode::Config, "sphere count must be >= 1");
  if (static_cast<std::size_t>(m) <= packing_radii.size()) return packing_radii[m - 1];
  return default_packing_radius(m);
}

void DomainSpec::validate() const {
  if (n != 2 && n != 3) throw Error(ErrorCode::Config, "domain.n must be 2 or 3");
  if (!(volume > 0.0)) throw Error(ErrorCode::Config, "domain.volume must be positive");
  for (std::size_t i = 0; i < packing_radii.size(); ++i) {
    const double r = packing_radii[i];
    if (!(r > 0.0)) throw Error(ErrorCode::Config, "packing radii must be positive");
    if (i > 0 && r > packing_radii[i - 1]) {
      throw Error(ErrorCode::Config, "packing radii must be nonincreasing in m");
    }
    const double m = static_cast<double>(i + 1);
    if (m * omega() * std::pow(r, n) / n > volume * (1.0 + 1e-12)) {
      throw Error(ErrorCode::Config, "m balls of the packing radius do not fit in the volume");
    }
  }
}

std::string to_string(StabilityClass c) {
  switch (c) {
    case StabilityClass::Stable: return "stable";
    case StabilityClass::Unstable: return "unstable";
    case StabilityClass::Marginal: return "marginal";
  }
  return "unstable";
}

ReducedEnergy::ReducedEnergy(FreeEnergyModel model, DomainSpec domain, double sigma, int m)
    : model_(std::move(model)), domain_(std::move(domain)), sigma_(sigma), m_(m) {
  if (!(sigma_ > 0.0)) throw Error(ErrorCode::Config, "sigma must be positive");
  if (m_ < 1) throw Error(ErrorCode::Config, "sphere count must be >= 1");
  domain_.validate();
  r_max_ = domain_.packing_radius(m_);
}

double ReducedEnergy::radius(double u) const {
  const double h = model_.jump_h(u);
  if (!(h > 0.0)) {
    std::ostringstream os;
    os << "h(" << u << ") = " << h << " is not positive";
    throw Error(ErrorCode::NoAdmissibleRadius, os.str());
  }
  return sigma_ / h;
}

bool ReducedEnergy::admissible(double u) const {
  return model_.admissible(u) && model_.jump_h(u) > sigma_ / r_max_;
}

void ReducedEnergy::require_admissible(double u) const {
  if (!admissible(u)) {
    std::ostringstream os;
    os << "temperature " << u << " violates h(u) > sigma/R_m = " << sigma_ / r_max_;
    throw Error(ErrorCode::OutOfRange, os.str());
  }
}

double ReducedEnergy::phi(double u) const {
  require_admissible(u);
  const int n = domain_.n;
  const double w = domain_.omega();
  const double r = radius(u);
  return domain_.volume * model_.eps(Phase::Outer, u) -
         m_ * w / n * std::pow(r, n) * model_.jump_eps(u) +
         sigma_ * m_ * w * std::pow(r, n - 1) / (n - 1);
}

double ReducedEnergy::phi_hform(double u) const {
  require_admissible(u);
  const int n = domain_.n;
  const double h = model_.jump_h(u);
  const double cn = m_ * domain_.omega() / (n * (n - 1)) * std::pow(sigma_, n);
  return domain_.volume * model_.eps(Phase::Outer, u) +
         cn * (std::pow(h, 1 - n) + (n - 1) * u * model_.jump_h_prime(u) * std::pow(h, -n));
}

double ReducedEnergy::interface_area(double u) const {
  return m_ * domain_.omega() * std::pow(radius(u), domain_.n - 1);
}

double ReducedEnergy::heat_capacity_integral(double u) const {
  const double inner_volume = m_ * domain_.omega() * std::pow(radius(u), domain_.n) / domain_.n;
  return domain_.volume * model_.kappa(Phase::Outer, u) - model_.jump_kappa(u) * inner_volume;
}

double ReducedEnergy::phi_prime(double u) const {
  require_admissible(u);
  const double r = radius(u);
  const double l = model_.latent_l(u);
  return heat_capacity_integral(u) - l * l * r * r * interface_area(u) / (sigma_ * u);
}

double ReducedEnergy::zeta(double u) const {
  require_admissible(u);
  const double l = model_.latent_l(u);
  if (l == 0.0) {
    throw Error(ErrorCode::DegenerateLatentHeat, "latent heat vanishes; zeta is infinite");
  }
  const double r = radius(u);
  return sigma_ * u * heat_capacity_integral(u) / (l * l * r * r * interface_area(u));
}

double ReducedEnergy::phi_prime_from_zeta(double u) const {
  const double r = radius(u);
  const double l = model_.latent_l(u);
  return (zeta(u) - 1.0) * l * l * r * r * interface_area(u) / (sigma_ * u);
}

std::vector<TemperatureInterval> ReducedEnergy::admissible_intervals() const {
  const double level = sigma_ / r_max_;
  auto g = [&](double u) { return model_.jump_h(u) - level; };
  const auto x = roots::sample_grid(model_.u_lo(), model_.u_hi(), kScanSamples);
  std::vector<TemperatureInterval> out;
  bool inside = g(x.front()) > 0.0;
  double start = x.front();
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const bool next_inside = g(x[i + 1]) > 0.0;
    if (next_inside != inside) {
      const double root = roots::bisect(g, x[i], x[i + 1], 1e-14);
      if (inside) {
        out.push_back({start, root});
      } else {
        start = root;
      }
      inside = next_inside;
    }
  }
  if (inside) out.push_back({start, x.back()});
  for (auto& iv : out) {
    iv.lo *= 1.0 + kShrink;
    iv.hi *= 1.0 - kShrink;
    // Snap inward until the endpoint is strictly admissible.
    for (int k = 0; k < 60 && !admissible(iv.lo); ++k) iv.lo *= 1.0 + kShrink;
    for (int k = 0; k < 60 && !admissible(iv.hi); ++k) iv.hi *= 1.0 - kShrink;
  }
  std::erase_if(out, [](const TemperatureInterval& iv) { return !(iv.hi > iv.lo); });
  return out;
}

double ReducedEnergy::argmin(double lo, double hi) const {
  return roots::golden_min([this](double u) { return phi(u); }, lo, hi, 1e-12 * hi);
}

StabilityClass classify(int m, double zeta) {
  if (m > 1) return StabilityClass::Unstable;
  if (std::abs(zeta - 1.0) <= kMarginalBand) return StabilityClass::Marginal;
  return zeta < 1.0 ? StabilityClass::Stable : StabilityClass::Unstable;
}

EquilibriumPoint make_equilibrium_point(const ReducedEnergy& phi, double u) {
  EquilibriumPoint p{};
  p.u = u;
  p.radius = phi.radius(u);
  p.phi_prime = phi.phi_prime(u);
  try {
    p.zeta = phi.zeta(u);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DegenerateLatentHeat) throw;
    p.zeta = std::numeric_limits<double>::infinity();
  }
  p.feasible = p.radius < phi.packing_radius() &&
               phi.model().jump_h(u) > phi.sigma() / phi.packing_radius();
  p.stability = classify(phi.sphere_count(), p.zeta);
  return p;
}

std::vector<EquilibriumPoint> find_equilibria(const EquilibriumProblem& problem) {
  ReducedEnergy phi(problem.model, problem.domain, problem.sigma, problem.m);
  const auto intervals = phi.admissible_intervals();
  if (intervals.empty()) {
    throw Error(ErrorCode::NoAdmissibleRange, "no temperature satisfies h(u) > sigma/R_m");
  }
  const double e0 = problem.energy;
  auto f = [&](double u) { return phi.phi(u) - e0; };
  auto fp = [&](double u) { return phi.phi_prime(u); };

  std::vector<double> found;
  for (const auto& iv : intervals) {
    auto x = roots::sample_grid(iv.lo, iv.hi, kScanSamples);
    // Add the local extrema of phi so that pairs of roots between two samples are split.
    std::vector<double> extra;
    double dprev = fp(x[0]);
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
      const double dnext = fp(x[i + 1]);
      if (dprev != 0.0 && dnext != 0.0 && std::signbit(dprev) != std::signbit(dnext)) {
        extra.push_back(roots::bisect(fp, x[i], x[i + 1], 1e-14));
      }
      dprev = dnext;
    }
    x.insert(x.end(), extra.begin(), extra.end());
    std::sort(x.begin(), x.end());
    std::vector<double> fx(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) fx[i] = f(x[i]);
    const double tangency_tol = 1e-13 * std::max(1.0, std::abs(e0));
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (std::abs(fx[i]) <= tangency_tol &&
          (fx[i] == 0.0 || std::find(extra.begin(), extra.end(), x[i]) != extra.end())) {
        found.push_back(x[i]);
        continue;
      }
      if (i + 1 < x.size() && std::abs(fx[i + 1]) > tangency_tol &&
          std::signbit(fx[i]) != std::signbit(fx[i + 1])) {
        found.push_back(roots::bisect(f, x[i], x[i + 1], 1e-12));
      }
    }
  }
  std::sort(found.begin(), found.end());
  found.erase(std::unique(found.begin(), found.end(),
                          [](double a, double b) { return std::abs(a - b) <= 1e-10 * std::abs(b); }),
              found.end());

  std::vector<EquilibriumPoint> out;
  out.reserve(found.size());
  for (double u : found) out.push_back(make_equilibrium_point(phi, u));
  return out;
}

std::vector<PhiSample> sample_phi(const ReducedEnergy& phi, int samples_per_interval) {
  std::vector<PhiSample> out;
  for (const auto& iv : phi.admissible_intervals()) {
    for (double u : roots::sample_grid(iv.lo, iv.hi, samples_per_interval - 1)) {
      double z;
      try {
        z = phi.zeta(u);
      } catch (const Error&) {
        z = std::numeric_limits<double>::infinity();
      }
      out.push_back({u, phi.phi(u), phi.phi_prime(u), z});
    }
  }
  return out;
}

}  // namespace stefan
