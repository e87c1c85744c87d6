#include "stefan/error.hpp"
#include "stefan/roots.hpp"
#include "stefan/simulate.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace stefan {

void MultiSphereConfig::validate() const {
  model.validate();
  domain.validate();
  if (model.undercooling_vanishes()) {
    throw Error(ErrorCode::Config, "ripening: the reduced model needs gamma > 0");
  }
  if (!(sigma > 0.0)) throw Error(ErrorCode::Config, "ripening: sigma must be positive");
  if (radii.empty()) throw Error(ErrorCode::Config, "ripening: need at least one radius");
  double vol = 0.0;
  for (double r : radii) {
    if (!(r > 0.0)) throw Error(ErrorCode::Config, "ripening: radii must be positive");
    vol += domain.omega() * std::pow(r, domain.n) / domain.n;
  }
  if (vol >= domain.volume) throw Error(ErrorCode::Config, "ripening: spheres do not fit in the domain");
  if (!(jitter >= 0.0) || jitter >= 1.0) throw Error(ErrorCode::Config, "ripening: jitter must lie in [0, 1)");
  if (!(dt > 0.0) || !(t_end > 0.0)) throw Error(ErrorCode::Config, "ripening: dt and t_end must be positive");
  if (!(collapse_radius > 0.0)) throw Error(ErrorCode::Config, "ripening: collapse_radius must be positive");
  if (!(u0 > 0.0)) throw Error(ErrorCode::Config, "ripening: u0 must be positive");
  if (record_every < 1) throw Error(ErrorCode::Config, "ripening: record_every must be >= 1");
}

MultiSphere::MultiSphere(MultiSphereConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

double MultiSphere::energy(double u, const std::vector<double>& radii) const {
  const auto& m = cfg_.model;
  const int n = cfg_.domain.n;
  const double w = cfg_.domain.omega();
  double e = cfg_.domain.volume * m.eps(Phase::Outer, u);
  const double jump = m.jump_eps(u);
  for (double r : radii) {
    e += -w / n * std::pow(r, n) * jump + cfg_.sigma * w * std::pow(r, n - 1) / (n - 1);
  }
  return e;
}

double MultiSphere::entropy(double u, const std::vector<double>& radii) const {
  const auto& m = cfg_.model;
  const int n = cfg_.domain.n;
  const double w = cfg_.domain.omega();
  const double jump = m.eta(Phase::Outer, u) - m.eta(Phase::Inner, u);
  double s = cfg_.domain.volume * m.eta(Phase::Outer, u);
  for (double r : radii) s -= w / n * std::pow(r, n) * jump;
  return s;
}

double MultiSphere::close_energy(const std::vector<double>& radii, double e0, double guess) const {
  const auto& m = cfg_.model;
  const int n = cfg_.domain.n;
  const double w = cfg_.domain.omega();
  auto f = [&](double u) { return energy(u, radii) - e0; };
  auto df = [&](double u) {
    double c = cfg_.domain.volume * m.kappa(Phase::Outer, u);
    for (double r : radii) c -= w / n * std::pow(r, n) * m.jump_kappa(u);
    return c;
  };
  double u = std::clamp(guess, m.u_lo(), m.u_hi());
  for (int it = 0; it < 60; ++it) {
    const double d = df(u);
    if (!(d > 0.0)) break;
    const double next = u - f(u) / d;
    if (!(next >= m.u_lo() && next <= m.u_hi())) break;
    if (std::abs(next - u) <= 1e-15 * u) return next;
    u = next;
  }
  const auto found = roots::scan_roots(f, m.u_lo(), m.u_hi(), 4000);
  if (found.empty()) {
    std::ostringstream os;
    os << "no temperature closes the energy E0 = " << e0;
    throw Error(ErrorCode::EnergyClosureFailed, os.str());
  }
  return *std::min_element(found.begin(), found.end(), [&](double a, double b) {
    return std::abs(a - guess) < std::abs(b - guess);
  });
}

MultiSphereState MultiSphere::initial_state() const {
  MultiSphereState st;
  st.t = 0.0;
  st.radii = cfg_.radii;
  if (cfg_.jitter > 0.0) {
    std::mt19937_64 rng(cfg_.seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (auto& r : st.radii) r *= 1.0 + cfg_.jitter * dist(rng);
  }
  st.energy = cfg_.target_energy ? *cfg_.target_energy : energy(cfg_.u0, st.radii);
  st.u = close_energy(st.radii, st.energy, cfg_.u0);
  return st;
}

std::vector<double> MultiSphere::reduced_rhs(const MultiSphereState& st) const {
  const auto& m = cfg_.model;
  const double u = close_energy(st.radii, st.energy, st.u);
  const double h = m.jump_h(u);
  const double g = m.undercooling(u);
  std::vector<double> v(st.radii.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = (h - cfg_.sigma / st.radii[i]) / g;
  return v;
}

double MultiSphere::production(const MultiSphereState& st) const {
  const auto v = reduced_rhs(st);
  const double g = cfg_.model.undercooling(st.u);
  const double w = cfg_.domain.omega();
  double p = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    p += w * std::pow(st.radii[i], cfg_.domain.n - 1) * g * v[i] * v[i] / st.u;
  }
  return p;
}

Eigen::MatrixXd MultiSphere::jacobian(const MultiSphereState& st, double rel_step) const {
  const std::size_t m = st.radii.size();
  Eigen::MatrixXd J(m, m);
  for (std::size_t j = 0; j < m; ++j) {
    const double h = rel_step * st.radii[j];
    MultiSphereState plus = st, minus = st;
    plus.radii[j] += h;
    minus.radii[j] -= h;
    const auto vp = reduced_rhs(plus);
    const auto vm = reduced_rhs(minus);
    for (std::size_t i = 0; i < m; ++i) J(i, j) = (vp[i] - vm[i]) / (2.0 * h);
  }
  return J;
}

std::vector<double> MultiSphere::jacobian_eigenvalues(const MultiSphereState& st) const {
  Eigen::EigenSolver<Eigen::MatrixXd> es(jacobian(st), false);
  std::vector<double> out;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()[i].real());
  std::sort(out.begin(), out.end());
  return out;
}

MultiSphereRunResult MultiSphere::run() {
  MultiSphereRunResult out;
  MultiSphereState st = initial_state();
  const int n = cfg_.domain.n;
  const double w = cfg_.domain.omega();
  auto sample = [&] {
    const double clearance = *std::min_element(st.radii.begin(), st.radii.end()) - cfg_.collapse_radius;
    out.series.push_back({st.t, st.radii, st.u, energy(st.u, st.radii), entropy(st.u, st.radii),
                          production(st), clearance});
  };
  auto check_geometry = [&](const std::vector<double>& radii) {
    double vol = 0.0;
    for (double r : radii) {
      if (!(r > cfg_.collapse_radius)) {
        std::ostringstream os;
        os << "sphere radius " << r << " fell below the collapse radius";
        throw Error(ErrorCode::GeometryEvent, os.str());
      }
      vol += w * std::pow(r, n) / n;
    }
    if (vol >= cfg_.domain.volume) throw Error(ErrorCode::GeometryEvent, "spheres fill the domain");
  };
  sample();
  double phi_prev = entropy(st.u, st.radii);
  out.min_entropy_increment = std::numeric_limits<double>::infinity();
  out.stop_reason = "t_end";
  try {
    while (cfg_.t_end - st.t > 1e-12 * std::max(1.0, std::abs(cfg_.t_end))) {
      const double dt = std::min(cfg_.dt, cfg_.t_end - st.t);
      auto rate = [&](const std::vector<double>& r) {
        check_geometry(r);
        MultiSphereState tmp = st;
        tmp.radii = r;
        return reduced_rhs(tmp);
      };
      const std::size_t m = st.radii.size();
      auto axpy = [&](const std::vector<double>& k, double c) {
        std::vector<double> r = st.radii;
        for (std::size_t i = 0; i < m; ++i) r[i] += c * k[i];
        return r;
      };
      const auto k1 = rate(st.radii);
      const auto k2 = rate(axpy(k1, 0.5 * dt));
      const auto k3 = rate(axpy(k2, 0.5 * dt));
      const auto k4 = rate(axpy(k3, dt));
      std::vector<double> next(m);
      for (std::size_t i = 0; i < m; ++i) {
        next[i] = st.radii[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      }
      check_geometry(next);
      st.radii = next;
      st.u = close_energy(st.radii, st.energy, st.u);
      st.t += dt;
      ++out.steps;
      const double e = energy(st.u, st.radii);
      out.max_energy_drift = std::max(out.max_energy_drift, std::abs(e - st.energy) / std::abs(st.energy));
      const double phi = entropy(st.u, st.radii);
      out.min_entropy_increment = std::min(out.min_entropy_increment, phi - phi_prev);
      phi_prev = phi;
      if (out.steps % cfg_.record_every == 0) sample();
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::GeometryEvent) throw;
    out.stop_code = e.code();
    out.stop_reason = std::string(to_string(e.code()));
  }
  if (out.series.back().t != st.t) sample();
  if (out.steps == 0) out.min_entropy_increment = 0.0;
  out.final_state = st;
  return out;
}

}  // namespace stefan
