#include "stefan/geometry.hpp"

#include "stefan/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace stefan {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGradientBound = 0.125;
constexpr int kMaxSphereDegree = 64;

// Normalized associated Legendre functions at x = cos(theta), including the
// sqrt(2) of the real harmonics for m > 0, with first and second theta derivatives.
struct LegendreTable {
  int degree;
  std::vector<double> p, dp, d2p;
  double& at(std::vector<double>& v, int l, int m) { return v[l * (degree + 1) + m]; }
  double get(const std::vector<double>& v, int l, int m) const { return v[l * (degree + 1) + m]; }
};

LegendreTable legendre(int degree, double theta) {
  LegendreTable t{degree, {}, {}, {}};
  const std::size_t sz = static_cast<std::size_t>((degree + 1) * (degree + 1));
  t.p.assign(sz, 0.0);
  t.dp.assign(sz, 0.0);
  t.d2p.assign(sz, 0.0);
  const double x = std::cos(theta);
  const double s = std::sin(theta);

  // Unnormalized P_l^m without the Condon-Shortley phase.
  std::vector<double> raw(sz, 0.0);
  auto r = [&](int l, int m) -> double& { return raw[l * (degree + 1) + m]; };
  double pmm = 1.0;
  for (int m = 0; m <= degree; ++m) {
    if (m > 0) pmm *= (2.0 * m - 1.0) * s;
    r(m, m) = pmm;
    if (m + 1 <= degree) r(m + 1, m) = x * (2.0 * m + 1.0) * pmm;
    for (int l = m + 2; l <= degree; ++l) {
      r(l, m) = ((2.0 * l - 1.0) * x * r(l - 1, m) - (l + m - 1.0) * r(l - 2, m)) / (l - m);
    }
  }
  for (int l = 0; l <= degree; ++l) {
    for (int m = 0; m <= l; ++m) {
      double c = std::sqrt((2.0 * l + 1.0) / (4.0 * kPi) *
                           std::exp(std::lgamma(l - m + 1.0) - std::lgamma(l + m + 1.0)));
      if (m > 0) c *= std::numbers::sqrt2;
      const double p = c * r(l, m);
      const double dp = (l * x * r(l, m) - (l + m) * (l > m ? r(l - 1, m) : 0.0)) / s * c;
      t.at(t.p, l, m) = p;
      t.at(t.dp, l, m) = dp;
      t.at(t.d2p, l, m) = -x / s * dp - (l * (l + 1.0) - m * m / (s * s)) * p;
    }
  }
  return t;
}

void check_perturbation(const SphereChart& chart, const HeightField& rho) {
  if (rho.dimension() != chart.n) {
    throw Error(ErrorCode::Domain, "height field and chart have different dimensions");
  }
  if (rho.sup_norm() > chart.half_width) {
    throw Error(ErrorCode::PerturbationTooLarge, "sup |rho| exceeds the tubular half-width");
  }
  if (rho.gradient_sup_norm(chart.radius) > kGradientBound) {
    throw Error(ErrorCode::PerturbationTooLarge, "sup |grad rho| exceeds 1/8");
  }
}

}  // namespace

SphereChart SphereChart::centered(int n, double radius) {
  SphereChart c;
  c.n = n;
  c.radius = radius;
  c.half_width = 0.5 * radius;
  c.validate();
  return c;
}

void SphereChart::validate() const {
  if (n != 2 && n != 3) throw Error(ErrorCode::Config, "chart dimension must be 2 or 3");
  if (!(radius > 0.0)) throw Error(ErrorCode::Config, "sphere radius must be positive");
  if (!(half_width > 0.0) || half_width > 0.5 * radius * (1.0 + 1e-14)) {
    throw Error(ErrorCode::Config, "tubular half-width must lie in (0, R/2]");
  }
}

WeingartenMap weingarten(const SphereChart& chart) {
  chart.validate();
  const int dim = chart.n - 1;
  return WeingartenMap{std::vector<double>(dim, -1.0 / chart.radius), -dim / chart.radius,
                       1.0 / chart.radius};
}

void gauss_legendre(int count, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(count, 0.0);
  weights.assign(count, 0.0);
  for (int i = 0; i < count; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (count + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= count; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (count == 1) p0 = 1.0, p1 = x;
      dp = count * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    nodes[i] = x;
    weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

HeightField HeightField::circle(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs,
                                int grid_points) {
  HeightField f;
  f.n_ = 2;
  const std::size_t len = std::max({cos_coeffs.size(), sin_coeffs.size(), std::size_t{1}});
  cos_coeffs.resize(len, 0.0);
  sin_coeffs.resize(len, 0.0);
  sin_coeffs[0] = 0.0;
  f.cos_ = std::move(cos_coeffs);
  f.sin_ = std::move(sin_coeffs);
  f.max_mode_ = static_cast<int>(len) - 1;
  f.n_theta_ = grid_points > 0 ? grid_points : std::max(256, 4 * f.max_mode_);
  if (f.n_theta_ < 4 * f.max_mode_) {
    throw Error(ErrorCode::Config, "angular grid must have at least 4x the maximal mode");
  }
  f.n_phi_ = 1;
  f.build_grid();
  return f;
}

HeightField HeightField::sphere(int degree, std::vector<double> coeffs, int n_theta, int n_phi) {
  if (degree < 0 || degree > kMaxSphereDegree) {
    throw Error(ErrorCode::Config, "spherical harmonic degree must lie in [0, 64]");
  }
  HeightField f;
  f.n_ = 3;
  f.max_mode_ = degree;
  coeffs.resize(static_cast<std::size_t>((degree + 1) * (degree + 1)), 0.0);
  f.sh_ = std::move(coeffs);
  f.n_theta_ = n_theta > 0 ? n_theta : std::max(48, 2 * degree + 2);
  f.n_phi_ = n_phi > 0 ? n_phi : std::max(96, 4 * degree + 4);
  if (f.n_phi_ < 4 * degree || f.n_theta_ < 2 * degree) {
    throw Error(ErrorCode::Config, "angular grid too coarse for the maximal degree");
  }
  f.build_grid();
  return f;
}

HeightField HeightField::constant(int n, double c, int max_mode) {
  if (n == 2) {
    std::vector<double> cs(max_mode + 1, 0.0);
    cs[0] = c;
    return circle(cs, {});
  }
  std::vector<double> sh((max_mode + 1) * (max_mode + 1), 0.0);
  sh[0] = c * std::sqrt(4.0 * kPi);
  return sphere(max_mode, sh);
}

void HeightField::build_grid() {
  grid_.clear();
  sup_ = 0.0;
  if (n_ == 2) {
    grid_.reserve(n_theta_);
    const double w = 2.0 * kPi / n_theta_;
    for (int j = 0; j < n_theta_; ++j) {
      const double th = w * j;
      GridSample g{th, 0.0, w, 0, 0, 0, 0, 0, 0};
      for (int k = 0; k <= max_mode_; ++k) {
        const double c = std::cos(k * th), s = std::sin(k * th);
        g.value += cos_[k] * c + sin_[k] * s;
        g.d_t += k * (-cos_[k] * s + sin_[k] * c);
        g.d_tt -= k * k * (cos_[k] * c + sin_[k] * s);
      }
      sup_ = std::max(sup_, std::abs(g.value));
      grid_.push_back(g);
    }
    return;
  }
  std::vector<double> x, wx;
  gauss_legendre(n_theta_, x, wx);
  const double dphi = 2.0 * kPi / n_phi_;
  grid_.reserve(static_cast<std::size_t>(n_theta_) * n_phi_);
  const int L = max_mode_;
  for (int i = 0; i < n_theta_; ++i) {
    const double th = std::acos(x[i]);
    const auto t = legendre(L, th);
    for (int j = 0; j < n_phi_; ++j) {
      const double ph = dphi * j;
      GridSample g{th, ph, wx[i] * dphi, 0, 0, 0, 0, 0, 0};
      for (int l = 0; l <= L; ++l) {
        for (int m = -l; m <= l; ++m) {
          const double a = sh_[sphere_index(l, m)];
          if (a == 0.0) continue;
          const int am = std::abs(m);
          const double p = t.get(t.p, l, am), dp = t.get(t.dp, l, am), d2p = t.get(t.d2p, l, am);
          double tr, dtr;
          if (m >= 0) {
            tr = std::cos(am * ph);
            dtr = -am * std::sin(am * ph);
          } else {
            tr = std::sin(am * ph);
            dtr = am * std::cos(am * ph);
          }
          g.value += a * p * tr;
          g.d_t += a * dp * tr;
          g.d_tt += a * d2p * tr;
          g.d_p += a * p * dtr;
          g.d_tp += a * dp * dtr;
          g.d_pp -= a * am * am * p * tr;
        }
      }
      sup_ = std::max(sup_, std::abs(g.value));
      grid_.push_back(g);
    }
  }
}

double HeightField::gradient_sup_norm(double radius) const {
  double out = 0.0;
  for (const auto& g : grid_) {
    double q = g.d_t * g.d_t;
    if (n_ == 3) {
      const double s = std::sin(g.theta);
      q += g.d_p * g.d_p / (s * s);
    }
    out = std::max(out, std::sqrt(q) / radius);
  }
  return out;
}

HeightField HeightField::scaled(double factor) const {
  HeightField f = *this;
  for (auto& c : f.cos_) c *= factor;
  for (auto& c : f.sin_) c *= factor;
  for (auto& c : f.sh_) c *= factor;
  f.sup_ *= std::abs(factor);
  for (auto& g : f.grid_) {
    g.value *= factor;
    g.d_t *= factor;
    g.d_p *= factor;
    g.d_tt *= factor;
    g.d_tp *= factor;
    g.d_pp *= factor;
  }
  return f;
}

std::vector<double> mean_curvature(const SphereChart& chart, const HeightField& rho) {
  chart.validate();
  check_perturbation(chart, rho);
  const int n = chart.n;
  const double R = chart.radius;
  std::vector<double> out;
  out.reserve(rho.grid().size());
  for (const auto& g : rho.grid()) {
    const double r = R + g.value;
    const double m0 = R / r;  // M0(rho) restricted to the tangent space
    // alpha = M0 grad rho = a_t e_theta + a_p e_phi
    const double a_t = g.d_t / r;
    const double dt_at = g.d_tt / r - g.d_t * g.d_t / (r * r);
    double a_p = 0.0, dt_ap = 0.0, dp_at = 0.0, dp_ap = 0.0, cot_term = 0.0;
    if (n == 3) {
      const double s = std::sin(g.theta), c = std::cos(g.theta);
      a_p = g.d_p / (s * r);
      dp_at = g.d_tp / r - g.d_t * g.d_p / (r * r);
      dt_ap = g.d_tp / (s * r) - g.d_p * c / (s * s * r) - g.d_p * g.d_t / (s * r * r);
      dp_ap = g.d_pp / (s * r) - g.d_p * g.d_p / (s * r * r);
      cot_term = c / s;
    }
    const double alpha2 = a_t * a_t + a_p * a_p;
    const double beta = 1.0 / std::sqrt(1.0 + alpha2);

    // tr[M0 D alpha], derivative along e_theta is d_theta / R, along e_phi d_phi / (R sin).
    double trace = m0 * dt_at / R;
    // alpha . D_alpha alpha
    double a_dalpha = a_t * (a_t * dt_at + a_p * dt_ap) / R;
    if (n == 3) {
      const double s = std::sin(g.theta);
      trace += m0 * (dp_ap + a_t * cot_term * s) / (R * s);
      a_dalpha += a_p * (a_t * dp_at + a_p * dp_ap) / (R * s);
    }
    const double trace_l = -(n - 1) / r;
    out.push_back(beta / (n - 1) * (trace_l + trace - beta * beta * m0 * a_dalpha));
  }
  return out;
}

double linearized_mode_eigenvalue(int n, double radius, int mode) {
  const double c = n == 2 ? static_cast<double>(mode) * mode : mode * (mode + 1.0);
  return ((n - 1) - c) / ((n - 1) * radius * radius);
}

HeightField linearized_curvature(const SphereChart& chart, const HeightField& rho) {
  chart.validate();
  if (rho.dimension() != chart.n) {
    throw Error(ErrorCode::Domain, "height field and chart have different dimensions");
  }
  const double R = chart.radius;
  if (chart.n == 2) {
    auto c = rho.cos_coeffs();
    auto s = rho.sin_coeffs();
    for (std::size_t k = 0; k < c.size(); ++k) {
      const double e = linearized_mode_eigenvalue(2, R, static_cast<int>(k));
      c[k] *= e;
      s[k] *= e;
    }
    return HeightField::circle(c, s, rho.n_theta());
  }
  auto a = rho.sphere_coeffs();
  for (int l = 0; l <= rho.max_mode(); ++l) {
    const double e = linearized_mode_eigenvalue(3, R, l);
    for (int m = -l; m <= l; ++m) a[HeightField::sphere_index(l, m)] *= e;
  }
  return HeightField::sphere(rho.max_mode(), a, rho.n_theta(), rho.n_phi());
}

std::vector<double> normal_velocity(const SphereChart& chart, const HeightField& rho,
                                    const HeightField& rho_t) {
  check_perturbation(chart, rho);
  if (rho_t.grid().size() != rho.grid().size()) {
    throw Error(ErrorCode::Domain, "rho and rho_t must share the angular grid");
  }
  std::vector<double> out;
  out.reserve(rho.grid().size());
  for (std::size_t i = 0; i < rho.grid().size(); ++i) {
    const auto& g = rho.grid()[i];
    const double r = chart.radius + g.value;
    double alpha2 = g.d_t * g.d_t / (r * r);
    if (chart.n == 3) {
      const double s = std::sin(g.theta);
      alpha2 += g.d_p * g.d_p / (s * s * r * r);
    }
    out.push_back(rho_t.grid()[i].value / std::sqrt(1.0 + alpha2));
  }
  return out;
}

SurfaceMeasure surface_measure_and_volume(const SphereChart& chart, const HeightField& rho) {
  chart.validate();
  if (rho.dimension() != chart.n) {
    throw Error(ErrorCode::Domain, "height field and chart have different dimensions");
  }
  SurfaceMeasure out{0.0, 0.0};
  for (const auto& g : rho.grid()) {
    const double r = chart.radius + g.value;
    if (chart.n == 2) {
      out.area += g.weight * std::sqrt(r * r + g.d_t * g.d_t);
      out.volume += g.weight * r * r / 2.0;
    } else {
      const double s = std::sin(g.theta);
      out.area += g.weight * r * std::sqrt(r * r + g.d_t * g.d_t + g.d_p * g.d_p / (s * s));
      out.volume += g.weight * r * r * r / 3.0;
    }
  }
  return out;
}

}  // namespace stefan
