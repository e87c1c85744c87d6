#include "stefan/error.hpp"
#include "stefan/roots.hpp"
#include "stefan/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace stefan {

namespace {

constexpr double kCompatibilityTol = 1e-8;
constexpr int kSecantIterations = 60;
constexpr int kNewtonIterations = 60;

void tridiagonal_solve(std::vector<double> a, std::vector<double> b, std::vector<double> c,
                       std::vector<double>& d) {
  const std::size_t m = b.size();
  for (std::size_t i = 1; i < m; ++i) {
    const double w = a[i] / b[i - 1];
    b[i] -= w * c[i - 1];
    d[i] -= w * d[i - 1];
  }
  d[m - 1] /= b[m - 1];
  for (std::size_t i = m - 1; i-- > 0;) d[i] = (d[i] - c[i] * d[i + 1]) / b[i];
}

}  // namespace

void RadialStefanConfig::validate() const {
  model.validate();
  if (n != 2 && n != 3) throw Error(ErrorCode::Config, "simulate: n must be 2 or 3");
  if (!(sigma > 0.0)) throw Error(ErrorCode::Config, "simulate: sigma must be positive");
  if (!(outer_radius > 0.0)) throw Error(ErrorCode::Config, "simulate: outer_radius must be positive");
  if (!(s0 > floor()) || !(s0 < outer_radius - floor())) {
    throw Error(ErrorCode::Config, "simulate: s0 must lie inside (eps_s, R_out - eps_s)");
  }
  if (inner_cells < 4 || outer_cells < 4) throw Error(ErrorCode::Config, "simulate: need >= 4 cells per phase");
  if (!(cfl > 0.0) || !(dt_min > 0.0) || !(dt_max >= dt_min) || !(dt_initial > 0.0)) {
    throw Error(ErrorCode::Config, "simulate: invalid time-step controller");
  }
  if (!(t_end > 0.0)) throw Error(ErrorCode::Config, "simulate: t_end must be positive");
  if (!(bound > 1.0)) throw Error(ErrorCode::Config, "simulate: bound M must exceed 1");
  if (!initial_profile && !(u_bulk > 0.0)) throw Error(ErrorCode::Config, "simulate: u_bulk must be positive");
  if (!(bump_width > 0.0)) throw Error(ErrorCode::Config, "simulate: bump_width must be positive");
  if (record_every < 1) throw Error(ErrorCode::Config, "simulate: record_every must be >= 1");
}

RadialStefan::RadialStefan(RadialStefanConfig cfg)
    : cfg_(std::move(cfg)), omega_(unit_sphere_measure(cfg_.n)) {
  cfg_.validate();
  state_ = initial_state();
}

void RadialStefan::set_state(RadialState s) {
  if (s.u_inner.size() != static_cast<std::size_t>(cfg_.inner_cells) ||
      s.u_outer.size() != static_cast<std::size_t>(cfg_.outer_cells)) {
    throw Error(ErrorCode::Domain, "state does not match the configured grid");
  }
  state_ = std::move(s);
}

double RadialStefan::shell(double a, double b) const {
  return omega_ / cfg_.n * (std::pow(b, cfg_.n) - std::pow(a, cfg_.n));
}

double RadialStefan::area(double r) const { return omega_ * std::pow(r, cfg_.n - 1); }

double RadialStefan::surface_energy(double s) const {
  return cfg_.sigma * area(s) / (cfg_.n - 1);
}

RadialStefan::Geometry RadialStefan::geometry(double s) const {
  Geometry g;
  const int n1 = cfg_.inner_cells, n2 = cfg_.outer_cells;
  g.edges_inner.resize(n1 + 1);
  g.edges_outer.resize(n2 + 1);
  for (int i = 0; i <= n1; ++i) g.edges_inner[i] = s * i / n1;
  for (int i = 0; i <= n2; ++i) g.edges_outer[i] = s + (cfg_.outer_radius - s) * i / n2;
  g.edges_inner[n1] = s;
  g.edges_outer[n2] = cfg_.outer_radius;
  return g;
}

double RadialStefan::interface_temperature(double s, double v, double guess) const {
  const auto& m = cfg_.model;
  const bool kinetic = !m.undercooling_vanishes();
  auto f = [&](double u) {
    return m.jump_h(u) - (kinetic ? m.undercooling(u) * v : 0.0) - cfg_.sigma / s;
  };
  double u = std::clamp(guess, m.u_lo(), m.u_hi());
  for (int it = 0; it < kNewtonIterations; ++it) {
    const double fu = f(u);
    double df = m.jump_h_prime(u);
    if (kinetic) {
      const double du = 1e-7 * u;
      const double up = std::min(u + du, m.u_hi()), dn = std::max(u - du, m.u_lo());
      df -= (m.undercooling(up) - m.undercooling(dn)) / (up - dn) * v;
    }
    if (df == 0.0 || !std::isfinite(df)) break;
    const double next = u - fu / df;
    if (!(next >= m.u_lo() && next <= m.u_hi())) break;
    if (std::abs(next - u) <= 1e-15 * u) return next;
    u = next;
    if (it == kNewtonIterations - 1 && std::abs(f(u)) <= 1e-12 * (1.0 + cfg_.sigma / s)) return u;
  }
  const auto found = roots::scan_roots(f, m.u_lo(), m.u_hi(), 4000);
  if (found.empty()) {
    std::ostringstream os;
    os << "interface condition has no solution for s = " << s;
    throw Error(ErrorCode::NumericalBreakdown, os.str());
  }
  return *std::min_element(found.begin(), found.end(), [&](double a, double b) {
    return std::abs(a - guess) < std::abs(b - guess);
  });
}

RadialState RadialStefan::initial_state() const {
  const auto& m = cfg_.model;
  const double s0 = cfg_.s0;
  const bool kinetic = !m.undercooling_vanishes();
  const auto g = geometry(s0);
  RadialState st;
  st.t = 0.0;
  st.s = s0;

  auto fill = [&](const std::function<double(double)>& prof) {
    st.u_inner.resize(cfg_.inner_cells);
    st.u_outer.resize(cfg_.outer_cells);
    for (int i = 0; i < cfg_.inner_cells; ++i) {
      st.u_inner[i] = prof(0.5 * (g.edges_inner[i] + g.edges_inner[i + 1]));
    }
    for (int i = 0; i < cfg_.outer_cells; ++i) {
      st.u_outer[i] = prof(0.5 * (g.edges_outer[i] + g.edges_outer[i + 1]));
    }
  };

  if (cfg_.initial_profile) {
    fill(cfg_.initial_profile);
    st.u_s = cfg_.initial_profile(s0);
    if (!kinetic) {
      const double res = m.jump_h(st.u_s) - cfg_.sigma / s0;
      if (std::abs(res) > kCompatibilityTol) {
        std::ostringstream os;
        os << "simulate: initial profile violates the interface condition at s0 (residual " << res
           << ")";
        throw Error(ErrorCode::Config, os.str());
      }
    }
  } else {
    const double u_gt = kinetic ? 0.0 : interface_temperature(s0, 0.0, cfg_.u_bulk);
    auto profile_for = [&, u_gt](double ub) {
      return [=, this](double r) {
        if (kinetic) return ub;
        const double z = (r - s0) / cfg_.bump_width;
        return ub + (u_gt - ub) * std::exp(-z * z);
      };
    };
    double ub = cfg_.u_bulk;
    if (cfg_.target_energy) {
      const double e0 = *cfg_.target_energy;
      auto f = [&](double x) {
        fill(profile_for(x));
        st.u_s = kinetic ? x : u_gt;
        return energy(st) - e0;
      };
      // Energy grows with the bulk temperature; expand a bracket around u_bulk.
      double lo = ub, hi = ub;
      double flo = f(lo), fhi = flo;
      for (int k = 0; k < 200 && std::signbit(flo) == std::signbit(fhi); ++k) {
        if (flo > 0.0) {
          lo = std::max(m.u_lo() * 1.0000001, lo * 0.9);
          flo = f(lo);
        } else {
          hi = std::min(m.u_hi(), hi * 1.1);
          fhi = f(hi);
        }
      }
      if (std::signbit(flo) == std::signbit(fhi)) {
        throw Error(ErrorCode::Config, "simulate: no bulk temperature reaches the target energy");
      }
      ub = roots::brent(f, lo, hi, 1e-15 * hi);
    }
    fill(profile_for(ub));
    st.u_s = kinetic ? ub : u_gt;
  }

  // Initial front velocity.
  if (kinetic) {
    st.v = (m.jump_h(st.u_s) - cfg_.sigma / s0) / m.undercooling(st.u_s);
  } else {
    const double ci = 0.5 * (g.edges_inner[cfg_.inner_cells - 1] + s0);
    const double co = 0.5 * (s0 + g.edges_outer[1]);
    const double jump = m.conductivity(Phase::Outer, st.u_s) * (st.u_outer[0] - st.u_s) / (co - s0) -
                        m.conductivity(Phase::Inner, st.u_s) * (st.u_s - st.u_inner.back()) / (s0 - ci);
    const double l = m.latent_l(st.u_s);
    st.v = l != 0.0 ? jump / l : 0.0;
  }
  return st;
}

double RadialStefan::energy(const RadialState& st) const {
  const auto g = geometry(st.s);
  const auto& m = cfg_.model;
  double e = 0.0;
  for (std::size_t i = 0; i < st.u_inner.size(); ++i) {
    e += m.eps(Phase::Inner, st.u_inner[i]) * shell(g.edges_inner[i], g.edges_inner[i + 1]);
  }
  for (std::size_t i = 0; i < st.u_outer.size(); ++i) {
    e += m.eps(Phase::Outer, st.u_outer[i]) * shell(g.edges_outer[i], g.edges_outer[i + 1]);
  }
  return e + surface_energy(st.s);
}

double RadialStefan::entropy(const RadialState& st) const {
  const auto g = geometry(st.s);
  const auto& m = cfg_.model;
  double e = 0.0;
  for (std::size_t i = 0; i < st.u_inner.size(); ++i) {
    e += m.eta(Phase::Inner, st.u_inner[i]) * shell(g.edges_inner[i], g.edges_inner[i + 1]);
  }
  for (std::size_t i = 0; i < st.u_outer.size(); ++i) {
    e += m.eta(Phase::Outer, st.u_outer[i]) * shell(g.edges_outer[i], g.edges_outer[i + 1]);
  }
  return e;
}

double RadialStefan::entropy_production(const RadialState& st) const {
  const auto g = geometry(st.s);
  const auto& m = cfg_.model;
  double p = 0.0;
  auto phase_sum = [&](const std::vector<double>& u, const std::vector<double>& edges, Phase ph) {
    for (std::size_t k = 1; k < u.size(); ++k) {
      const double cl = 0.5 * (edges[k - 1] + edges[k]);
      const double cr = 0.5 * (edges[k] + edges[k + 1]);
      const double d = 0.5 * (m.conductivity(ph, u[k - 1]) + m.conductivity(ph, u[k]));
      const double du = u[k] - u[k - 1];
      p += area(edges[k]) * d * du * du / ((cr - cl) * u[k] * u[k - 1]);
    }
  };
  phase_sum(st.u_inner, g.edges_inner, Phase::Inner);
  phase_sum(st.u_outer, g.edges_outer, Phase::Outer);
  const double a = area(st.s);
  {
    const double uc = st.u_inner.back();
    const double dist = st.s - 0.5 * (g.edges_inner[g.edges_inner.size() - 2] + st.s);
    const double d = 0.5 * (m.conductivity(Phase::Inner, uc) + m.conductivity(Phase::Inner, st.u_s));
    p += a * d * (st.u_s - uc) * (st.u_s - uc) / (dist * uc * st.u_s);
  }
  {
    const double uc = st.u_outer.front();
    const double dist = 0.5 * (st.s + g.edges_outer[1]) - st.s;
    const double d = 0.5 * (m.conductivity(Phase::Outer, uc) + m.conductivity(Phase::Outer, st.u_s));
    p += a * d * (st.u_s - uc) * (st.u_s - uc) / (dist * uc * st.u_s);
  }
  if (!m.undercooling_vanishes()) p += a * m.undercooling(st.u_s) * st.v * st.v / st.u_s;
  return p;
}

double RadialStefan::clearance(const RadialState& st) const {
  return std::min(st.s, cfg_.outer_radius - st.s);
}

std::vector<double> RadialStefan::diffuse(const std::vector<double>& edges,
                                          const std::vector<double>& content,
                                          const std::vector<double>& guess,
                                          const std::vector<double>& d_face, Phase phase, double u_s,
                                          double dt) const {
  const auto& m = cfg_.model;
  const std::size_t N = content.size();
  const bool inner = phase == Phase::Inner;
  std::vector<double> vol(N), centers(N);
  for (std::size_t i = 0; i < N; ++i) {
    vol[i] = shell(edges[i], edges[i + 1]);
    centers[i] = 0.5 * (edges[i] + edges[i + 1]);
  }
  // Conductance of face k (between cells k-1 and k); faces 0 and N are the
  // domain ends, one of which is the interface.
  std::vector<double> G(N + 1, 0.0);
  for (std::size_t k = 1; k < N; ++k) {
    G[k] = area(edges[k]) * d_face[k] / (centers[k] - centers[k - 1]);
  }
  if (inner) {
    G[N] = area(edges[N]) * d_face[N] / (edges[N] - centers[N - 1]);
  } else {
    G[0] = area(edges[0]) * d_face[0] / (centers[0] - edges[0]);
  }

  std::vector<double> u = guess;
  std::vector<double> a(N), b(N), c(N), r(N);
  for (int it = 0; it < kNewtonIterations; ++it) {
    for (std::size_t i = 0; i < N; ++i) {
      double flux = 0.0;
      const double gl = G[i], gr = G[i + 1];
      const double ul = i > 0 ? u[i - 1] : (inner ? 0.0 : u_s);
      const double ur = i + 1 < N ? u[i + 1] : (inner ? u_s : 0.0);
      if (i > 0 || !inner) flux += gl * (ul - u[i]);
      if (i + 1 < N || inner) flux += gr * (ur - u[i]);
      r[i] = -(m.eps(phase, u[i]) * vol[i] - content[i] - dt * flux);
      b[i] = m.kappa(phase, u[i]) * vol[i] + dt * (((i > 0 || !inner) ? gl : 0.0) +
                                                   ((i + 1 < N || inner) ? gr : 0.0));
      a[i] = i > 0 ? -dt * gl : 0.0;
      c[i] = i + 1 < N ? -dt * gr : 0.0;
    }
    tridiagonal_solve(a, b, c, r);
    double step = 1.0;
    for (int damp = 0; damp < 40; ++damp) {
      bool ok = true;
      for (std::size_t i = 0; i < N && ok; ++i) {
        const double x = u[i] + step * r[i];
        ok = x >= m.u_lo() && x <= m.u_hi() && std::isfinite(x);
      }
      if (ok) break;
      step *= 0.5;
    }
    double change = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double x = u[i] + step * r[i];
      if (!(x >= m.u_lo()) || !(x <= m.u_hi())) {
        std::ostringstream os;
        os << "temperature left the admissible interval (u = " << x << ")";
        throw Error(x <= m.u_lo() ? ErrorCode::TemperaturePositivityLost : ErrorCode::NumericalBreakdown,
                    os.str());
      }
      change = std::max(change, std::abs(x - u[i]));
      scale = std::max(scale, std::abs(x));
      u[i] = x;
    }
    if (change <= 1e-14 * scale) return u;
  }
  throw Error(ErrorCode::NumericalBreakdown, "Newton iteration for implicit diffusion did not converge");
}

RadialStefan::Trial RadialStefan::trial(double s_new, double dt) const {
  const auto& m = cfg_.model;
  const RadialState& old = state_;
  if (!(s_new > cfg_.floor()) || !(s_new < cfg_.outer_radius - cfg_.floor())) {
    std::ostringstream os;
    os << "front reached s = " << s_new << " outside [" << cfg_.floor() << ", "
       << cfg_.outer_radius - cfg_.floor() << "]";
    throw Error(ErrorCode::GeometryEvent, os.str());
  }
  const double v = (s_new - old.s) / dt;
  const double u_s = interface_temperature(s_new, v, old.u_s);

  const auto g_old = geometry(old.s);
  const auto g_new = geometry(s_new);
  const int n1 = cfg_.inner_cells, n2 = cfg_.outer_cells;

  std::vector<double> e1(n1), e2(n2);
  for (int i = 0; i < n1; ++i) {
    e1[i] = m.eps(Phase::Inner, old.u_inner[i]) * shell(g_old.edges_inner[i], g_old.edges_inner[i + 1]);
  }
  for (int i = 0; i < n2; ++i) {
    e2[i] = m.eps(Phase::Outer, old.u_outer[i]) * shell(g_old.edges_outer[i], g_old.edges_outer[i + 1]);
  }
  auto swept = [&](double r_old, double r_new) {
    return omega_ / cfg_.n * (std::pow(r_new, cfg_.n) - std::pow(r_old, cfg_.n));
  };
  // Donor-cell remap across moving interior edges.
  for (int k = 1; k < n1; ++k) {
    const double dv = swept(g_old.edges_inner[k], g_new.edges_inner[k]);
    const double donor = dv > 0.0 ? m.eps(Phase::Inner, old.u_inner[k]) : m.eps(Phase::Inner, old.u_inner[k - 1]);
    e1[k - 1] += donor * dv;
    e1[k] -= donor * dv;
  }
  for (int k = 1; k < n2; ++k) {
    const double dv = swept(g_old.edges_outer[k], g_new.edges_outer[k]);
    const double donor = dv > 0.0 ? m.eps(Phase::Outer, old.u_outer[k]) : m.eps(Phase::Outer, old.u_outer[k - 1]);
    e2[k - 1] += donor * dv;
    e2[k] -= donor * dv;
  }
  // Volume swept by the front changes phase at the interface temperature.
  const double dv_front = swept(old.s, s_new);
  e1[n1 - 1] += m.eps(Phase::Inner, u_s) * dv_front;
  e2[0] -= m.eps(Phase::Outer, u_s) * dv_front;

  // Conductivities frozen at the start of the step.
  std::vector<double> d1(n1 + 1, 0.0), d2(n2 + 1, 0.0);
  for (int k = 1; k < n1; ++k) {
    d1[k] = 0.5 * (m.conductivity(Phase::Inner, old.u_inner[k - 1]) + m.conductivity(Phase::Inner, old.u_inner[k]));
  }
  d1[n1] = 0.5 * (m.conductivity(Phase::Inner, old.u_inner[n1 - 1]) + m.conductivity(Phase::Inner, old.u_s));
  for (int k = 1; k < n2; ++k) {
    d2[k] = 0.5 * (m.conductivity(Phase::Outer, old.u_outer[k - 1]) + m.conductivity(Phase::Outer, old.u_outer[k]));
  }
  d2[0] = 0.5 * (m.conductivity(Phase::Outer, old.u_outer[0]) + m.conductivity(Phase::Outer, old.u_s));

  Trial t;
  t.state.t = old.t + dt;
  t.state.s = s_new;
  t.state.v = v;
  t.state.u_s = u_s;
  t.state.u_inner = diffuse(g_new.edges_inner, e1, old.u_inner, d1, Phase::Inner, u_s, dt);
  t.state.u_outer = diffuse(g_new.edges_outer, e2, old.u_outer, d2, Phase::Outer, u_s, dt);
  double e_new = 0.0;
  for (int i = 0; i < n1; ++i) {
    e_new += m.eps(Phase::Inner, t.state.u_inner[i]) * shell(g_new.edges_inner[i], g_new.edges_inner[i + 1]);
  }
  for (int i = 0; i < n2; ++i) {
    e_new += m.eps(Phase::Outer, t.state.u_outer[i]) * shell(g_new.edges_outer[i], g_new.edges_outer[i + 1]);
  }
  t.residual = e_new + surface_energy(s_new) - energy(old);
  return t;
}

void RadialStefan::check_state(const RadialState& st) const {
  const auto& m = cfg_.model;
  if (m.undercooling_vanishes() && std::abs(m.latent_l(st.u_s)) < 1.0 / cfg_.bound) {
    std::ostringstream os;
    os << "latent heat l(u_s) = " << m.latent_l(st.u_s) << " degenerates with gamma = 0";
    throw Error(ErrorCode::WellPosednessLost, os.str());
  }
  for (double x : st.u_inner) {
    if (!(x > 0.0)) throw Error(ErrorCode::TemperaturePositivityLost, "temperature reached zero");
  }
  for (double x : st.u_outer) {
    if (!(x > 0.0)) throw Error(ErrorCode::TemperaturePositivityLost, "temperature reached zero");
  }
}

void RadialStefan::step(double dt) {
  if (!(dt > 0.0)) throw Error(ErrorCode::Domain, "time step must be positive");
  const double e_old = energy(state_);
  const double tol = 2e-15 * std::max(1.0, std::abs(e_old));
  const double s = state_.s;
  const double lo_bound = cfg_.floor(), hi_bound = cfg_.outer_radius - cfg_.floor();
  auto clamp_inside = [&](double x) {
    const double margin = 1e-12 * cfg_.outer_radius;
    return std::clamp(x, lo_bound + margin, hi_bound - margin);
  };

  const double predicted = s + state_.v * dt;
  if (!(predicted > lo_bound) || !(predicted < hi_bound)) {
    std::ostringstream os;
    os << "front would leave [" << lo_bound << ", " << hi_bound << "] (s = " << s << ", V = " << state_.v
       << ")";
    throw Error(ErrorCode::GeometryEvent, os.str());
  }
  double a = clamp_inside(predicted);
  Trial ta = trial(a, dt);
  if (std::abs(ta.residual) > tol) {
    double b = clamp_inside(a + std::max(1e-9 * s, 1e-3 * std::abs(a - s)) * (a >= s ? 1.0 : -1.0));
    if (b == a) b = clamp_inside(a - 1e-9 * s);
    Trial tb = trial(b, dt);
    bool done = std::abs(tb.residual) <= tol;
    for (int it = 0; it < kSecantIterations && !done; ++it) {
      if (tb.residual == ta.residual) break;
      const double c = b - tb.residual * (b - a) / (tb.residual - ta.residual);
      if (!std::isfinite(c)) break;
      a = b;
      ta = std::move(tb);
      b = c;
      tb = trial(b, dt);
      done = std::abs(tb.residual) <= tol || std::abs(b - a) <= 1e-15 * s;
    }
    if (!done) {
      // Bracket the energy residual around the old front and refine.
      double lo = s, hi = s;
      double width = std::max(1e-8 * s, 2.0 * std::abs(state_.v) * dt);
      auto res = [&](double x) { return trial(x, dt).residual; };
      double flo = res(clamp_inside(s - width)), fhi = res(clamp_inside(s + width));
      lo = clamp_inside(s - width);
      hi = clamp_inside(s + width);
      for (int k = 0; k < 60 && std::signbit(flo) == std::signbit(fhi); ++k) {
        width *= 2.0;
        lo = clamp_inside(s - width);
        hi = clamp_inside(s + width);
        flo = res(lo);
        fhi = res(hi);
      }
      if (std::signbit(flo) == std::signbit(fhi)) {
        throw Error(ErrorCode::NumericalBreakdown, "front position conserving energy not found");
      }
      b = roots::brent(res, lo, hi, 1e-15 * s);
      tb = trial(b, dt);
    }
    ta = std::move(tb);
  }
  check_state(ta.state);
  state_ = std::move(ta.state);
}

double RadialStefan::front_limit() const {
  if (state_.v == 0.0) return std::numeric_limits<double>::infinity();
  const auto& m = cfg_.model;
  const double s = state_.s, speed = std::abs(state_.v);
  const double h1 = s / cfg_.inner_cells, h2 = (cfg_.outer_radius - s) / cfg_.outer_cells;
  double dt = cfg_.cfl * std::min(h1, h2) / speed;
  // The swept volume should not move the neighbouring cell temperature by
  // more than a fraction of itself.
  const auto g = geometry(s);
  auto limit = [&](Phase p, double u, double vol) {
    const double jump = std::abs(m.eps(p, state_.u_s) - m.eps(p, u));
    if (jump == 0.0) return;
    dt = std::min(dt, 0.25 * u * m.kappa(p, u) * vol / (jump * area(s) * speed));
  };
  limit(Phase::Inner, state_.u_inner.back(), shell(g.edges_inner[cfg_.inner_cells - 1], s));
  limit(Phase::Outer, state_.u_outer.front(), shell(s, g.edges_outer[1]));
  return dt;
}

double RadialStefan::suggest_dt(double previous) const {
  if (cfg_.fixed_dt) return cfg_.dt_max;
  const double dt = std::min({cfg_.dt_max, 1.2 * previous, front_limit()});
  return std::max(dt, cfg_.dt_min);
}

RadialRunResult RadialStefan::run() {
  RadialRunResult out;
  const auto& m = cfg_.model;
  state_ = initial_state();
  const double e0 = energy(state_);
  out.initial_energy = e0;
  {
    const auto g = geometry(state_.s);
    const double ci = 0.5 * (g.edges_inner[cfg_.inner_cells - 1] + state_.s);
    const double co = 0.5 * (state_.s + g.edges_outer[1]);
    const double jump =
        m.conductivity(Phase::Outer, state_.u_s) * (state_.u_outer[0] - state_.u_s) / (co - state_.s) -
        m.conductivity(Phase::Inner, state_.u_s) * (state_.u_s - state_.u_inner.back()) / (state_.s - ci);
    const double gam = m.undercooling(state_.u_s);
    if (m.undercooling_vanishes()) {
      out.compatibility_residual = m.jump_h(state_.u_s) - cfg_.sigma / state_.s;
    } else {
      out.compatibility_residual = jump - (m.latent_l(state_.u_s) - gam * state_.v) * state_.v;
    }
  }
  double phi_prev = entropy(state_);
  out.min_entropy_increment = std::numeric_limits<double>::infinity();
  auto record = [&](double dt) {
    out.series.push_back({state_.t, state_.s, state_.u_s, energy(state_), entropy(state_),
                          entropy_production(state_), clearance(state_), dt});
  };
  auto update_flags = [&] {
    double umax = 0.0, umin = std::numeric_limits<double>::infinity();
    for (double x : state_.u_inner) umax = std::max(umax, std::abs(x)), umin = std::min(umin, x);
    for (double x : state_.u_outer) umax = std::max(umax, std::abs(x)), umin = std::min(umin, x);
    if (umax > cfg_.bound) out.flags.bounded = false;
    if (umin < 1.0 / cfg_.bound) out.flags.temperature_positive = false;
    if (std::abs(m.latent_l(state_.u_s)) < 1.0 / cfg_.bound) out.flags.latent_nondegenerate = false;
    if (state_.s < cfg_.floor() || state_.s > cfg_.outer_radius - cfg_.floor()) {
      out.flags.ball_condition = false;
    }
  };
  record(0.0);
  double dt = cfg_.fixed_dt ? cfg_.dt_max : std::min(cfg_.dt_initial, cfg_.dt_max);
  out.stop_reason = "t_end";
  try {
    while (cfg_.t_end - state_.t > 1e-12 * std::max(1.0, std::abs(cfg_.t_end))) {
      if (out.steps >= cfg_.max_steps) {
        out.stop_reason = "max_steps";
        break;
      }
      dt = out.steps == 0 ? dt : suggest_dt(dt);
      if (out.steps == 0 && !cfg_.fixed_dt) dt = std::max(std::min(dt, front_limit()), cfg_.dt_min);
      dt = std::min(dt, cfg_.t_end - state_.t);
      for (;;) {
        try {
          step(dt);
          break;
        } catch (const Error& e) {
          if (cfg_.fixed_dt || e.code() != ErrorCode::TemperaturePositivityLost || dt <= cfg_.dt_min) throw;
          dt = std::max(0.5 * dt, cfg_.dt_min);
        }
      }
      ++out.steps;
      const double e = energy(state_);
      out.max_energy_drift = std::max(out.max_energy_drift, std::abs(e - e0) / std::abs(e0));
      const double phi = entropy(state_);
      out.min_entropy_increment = std::min(out.min_entropy_increment, phi - phi_prev);
      phi_prev = phi;
      out.max_constraint_residual =
          std::max(out.max_constraint_residual,
                   std::abs(m.jump_h(state_.u_s) - cfg_.sigma / state_.s -
                            (m.undercooling_vanishes() ? 0.0 : m.undercooling(state_.u_s) * state_.v)));
      update_flags();
      if (out.steps % cfg_.record_every == 0) record(dt);
    }
  } catch (const Error& e) {
    const auto code = e.code();
    if (code != ErrorCode::WellPosednessLost && code != ErrorCode::TemperaturePositivityLost &&
        code != ErrorCode::GeometryEvent) {
      throw;
    }
    out.stop_code = code;
    out.stop_reason = std::string(to_string(code));
    if (code == ErrorCode::GeometryEvent) out.flags.ball_condition = false;
    if (code == ErrorCode::WellPosednessLost) out.flags.latent_nondegenerate = false;
    if (code == ErrorCode::TemperaturePositivityLost) out.flags.temperature_positive = false;
  }
  if (out.series.empty() || out.series.back().t != state_.t) record(dt);
  if (out.steps == 0) out.min_entropy_increment = 0.0;
  out.final_state = state_;
  return out;
}

DecayFit fit_front_decay(const std::vector<RadialSample>& series, double s_inf, double t_from) {
  std::vector<double> xs, ys;
  for (const auto& p : series) {
    const double dev = std::abs(p.s - s_inf);
    if (p.t >= t_from && dev > 0.0) {
      xs.push_back(p.t);
      ys.push_back(std::log(dev));
    }
  }
  DecayFit fit;
  fit.points = static_cast<int>(xs.size());
  if (xs.size() < 3) return fit;
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i], my += ys[i];
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) return fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  return fit;
}

}  // namespace stefan
