#include "stefan/spectral.hpp"

#include "stefan/equilibria.hpp"
#include "stefan/error.hpp"
#include "stefan/parallel.hpp"
#include "stefan/roots.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace stefan {

namespace {

// Decay lengths kept when the solution is a boundary layer at the interface.
constexpr double kLayerWidths = 60.0;
constexpr double kNodesPerUnit = 40.0;
constexpr double kKernelLambda = 1e-10;
constexpr double kKernelTol = 1e-6;
constexpr double kSuspectRatio = 1e-3;
constexpr double kMaxWindow = 1e12;

struct RadialGrid {
  int n = 0;
  double r0 = 0, r1 = 0;
  int cells = 0;
  std::vector<double> g;   // face conductance r_{i+1/2}^{n-1} / h, i = 0..cells-1
  std::vector<double> i1;  // integral of r^{n-1} over the control volume of node i
  std::vector<double> i3;  // integral of r^{n-3}
};

double ipow(double x, int p) {
  double r = 1.0;
  for (int i = 0; i < p; ++i) r *= x;
  return r;
}

double integral_pow(int p, double a, double b) {
  // Integral of r^p over [a, b], p in {-1, 0, 1, 2}.
  if (p == -1) return std::log(b / a);
  return (ipow(b, p + 1) - ipow(a, p + 1)) / (p + 1);
}

RadialGrid build_grid(int n, double r0, double r1, int cells) {
  RadialGrid gr;
  gr.n = n;
  gr.r0 = r0;
  gr.r1 = r1;
  gr.cells = cells;
  const double h = (r1 - r0) / cells;
  gr.g.resize(cells);
  gr.i1.resize(cells + 1);
  gr.i3.resize(cells + 1);
  for (int i = 0; i < cells; ++i) {
    const double rf = r0 + (i + 0.5) * h;
    gr.g[i] = ipow(rf, n - 1) / h;
  }
  for (int i = 0; i <= cells; ++i) {
    const double r = r0 + i * h;
    const double a = std::max(r0, r - 0.5 * h);
    const double b = std::min(r1, r + 0.5 * h);
    gr.i1[i] = integral_pow(n - 1, a, b);
    gr.i3[i] = a > 0.0 ? integral_pow(n - 3, a, b) : 0.0;
  }
  return gr;
}

// Small per-thread cache: determinants for all modes are evaluated at the
// same lambda, so grids repeat.
const RadialGrid& cached_grid(int n, double r0, double r1, int cells) {
  thread_local std::array<RadialGrid, 8> cache;
  thread_local std::size_t next = 0;
  for (const auto& g : cache) {
    if (g.cells == cells && g.n == n && g.r0 == r0 && g.r1 == r1) return g;
  }
  auto& slot = cache[next];
  next = (next + 1) % cache.size();
  slot = build_grid(n, r0, r1, cells);
  return slot;
}

// v'(R) for the inner problem on [r0, R] (v(R) = 1) or the outer problem on
// [R, r1] (v(R) = 1), one value per angular constant in `c`. The far end is a
// symmetry/Neumann node unless the domain was truncated, in which case v = 0
// there. The unknown is z = v - 1, which keeps the small-lambda traces free of
// cancellation. All modes share one sweep so their recurrences interleave.
void log_derivatives(const RadialGrid& gr, const std::vector<double>& c, double q, bool inner, bool far_dirichlet,
                     std::vector<double>& out) {
  const int N = gr.cells;
  const std::size_t M = c.size();
  thread_local std::vector<double> pc, pd;
  pc.assign(M, 0.0);
  pd.assign(M, 0.0);
  // Rows are ordered from the far end towards the interface; the interface
  // row (z = 0) closes the system.
  auto node = [&](int k) { return inner ? k : N - k; };
  auto face = [&](int k) { return inner ? k : N - 1 - k; };  // face between rows k and k+1
  {
    const int i = node(0);
    const double gu = gr.g[face(0)];
    for (std::size_t j = 0; j < M; ++j) {
      if (far_dirichlet || (inner && gr.r0 == 0.0 && c[j] > 0.0)) {
        pc[j] = 0.0;
        pd[j] = -1.0;
      } else {
        const double src = q * gr.i1[i] + c[j] * gr.i3[i];
        const double inv = 1.0 / (gu + src);
        pc[j] = -gu * inv;
        pd[j] = -src * inv;
      }
    }
  }
  for (int k = 1; k < N; ++k) {
    const int i = node(k);
    const double gl = gr.g[face(k - 1)];
    const double gu = gr.g[face(k)];
    const double qi = q * gr.i1[i], ci = gr.i3[i];
    for (std::size_t j = 0; j < M; ++j) {
      const double src = qi + c[j] * ci;
      const double inv = 1.0 / (gl + gu + src + gl * pc[j]);
      pc[j] = -gu * inv;
      pd[j] = (-src + gl * pd[j]) * inv;
    }
  }
  // Row N is the interface: z = 0. Back-substitute only the neighbour.
  const int ii = node(N);
  const double area = ipow(inner ? gr.r1 : gr.r0, gr.n - 1);
  const double gf = gr.g[face(N - 1)];
  out.resize(M);
  for (std::size_t j = 0; j < M; ++j) {
    const double src = q * gr.i1[ii] + c[j] * gr.i3[ii];
    out[j] = inner ? (src - gf * pd[j]) / area : (gf * pd[j] - src) / area;
  }
}

std::vector<double> side_traces(const SpectralConfig& cfg, double lambda, const std::vector<int>& modes, bool inner,
                                int cells_base) {
  const double kappa = inner ? cfg.kappa1 : cfg.kappa2;
  const double dcoef = inner ? cfg.d1 : cfg.d2;
  const double q = kappa * lambda / dcoef;
  std::vector<double> c(modes.size());
  for (std::size_t j = 0; j < modes.size(); ++j) c[j] = cfg.mode_constant(modes[j]);
  const double R = cfg.inner_radius;
  double lo = inner ? 0.0 : R;
  double hi = inner ? R : cfg.outer_radius;
  bool truncated = false;
  const double sq = std::sqrt(q);
  if (sq * (hi - lo) > kLayerWidths) {
    truncated = true;
    if (inner) {
      lo = R - kLayerWidths / sq;
    } else {
      hi = R + kLayerWidths / sq;
    }
  }
  const int cells = std::max(cells_base, static_cast<int>(std::ceil(kNodesPerUnit * (hi - lo) * sq)));
  std::vector<double> w1, w2;
  log_derivatives(cached_grid(cfg.n, lo, hi, cells), c, q, inner, truncated, w1);
  if (!cfg.richardson) return w1;
  log_derivatives(cached_grid(cfg.n, lo, hi, 2 * cells), c, q, inner, truncated, w2);
  for (std::size_t j = 0; j < modes.size(); ++j) {
    const double w = (4.0 * w2[j] - w1[j]) / 3.0;
    if (!std::isfinite(w) || std::abs(w - w2[j]) > 1e-2 * (std::abs(w) + 1.0 / R)) {
      std::ostringstream os;
      os << "radial solve did not converge (mode " << modes[j] << ", lambda " << lambda << ", "
         << (inner ? "inner" : "outer") << ": w_N=" << w1[j] << ", w_2N=" << w2[j] << ")";
      throw Error(ErrorCode::NumericalBreakdown, os.str());
    }
    w1[j] = w;
  }
  return w1;
}

}  // namespace

SpectralConfig SpectralConfig::from_equilibrium(const FreeEnergyModel& model, int n, double sigma,
                                                double u, double outer_radius) {
  SpectralConfig cfg;
  cfg.n = n;
  cfg.sigma = sigma;
  cfg.u = u;
  const double h = model.jump_h(u);
  if (!(h > 0.0)) throw Error(ErrorCode::NoAdmissibleRadius, "h(u) must be positive");
  cfg.inner_radius = sigma / h;
  cfg.outer_radius = outer_radius;
  cfg.kappa1 = model.kappa(Phase::Inner, u);
  cfg.kappa2 = model.kappa(Phase::Outer, u);
  cfg.d1 = model.conductivity(Phase::Inner, u);
  cfg.d2 = model.conductivity(Phase::Outer, u);
  cfg.latent = model.latent_l(u);
  cfg.gamma = model.undercooling(u);
  return cfg;
}

void SpectralConfig::validate() const {
  if (n != 2 && n != 3) throw Error(ErrorCode::Config, "spectrum: n must be 2 or 3");
  if (!(inner_radius > 0.0) || !(outer_radius > inner_radius)) {
    throw Error(ErrorCode::Config, "spectrum: need 0 < R* < R_out");
  }
  if (!(u > 0.0)) throw Error(ErrorCode::Config, "spectrum: u* must be positive");
  if (!(kappa1 > 0.0) || !(kappa2 > 0.0) || !(d1 > 0.0) || !(d2 > 0.0)) {
    throw Error(ErrorCode::Config, "spectrum: kappa* and d* must be positive");
  }
  if (!(gamma >= 0.0)) throw Error(ErrorCode::Config, "spectrum: gamma* must be nonnegative");
  if (!(sigma > 0.0)) throw Error(ErrorCode::Config, "spectrum: sigma must be positive");
  if (gamma == 0.0 && latent == 0.0) {
    throw Error(ErrorCode::WellPosednessLost, "spectrum: l* = 0 with gamma* = 0");
  }
  if (max_mode < 0) throw Error(ErrorCode::Config, "spectrum: max_mode must be >= 0");
  if (!(lambda_min > 0.0)) throw Error(ErrorCode::Config, "spectrum: lambda_min must be positive");
  if (points_per_decade < 8) throw Error(ErrorCode::Config, "spectrum: points_per_decade >= 8");
  if (radial_nodes < 2000) throw Error(ErrorCode::Config, "spectrum: radial_nodes must be >= 2000");
}

double SpectralConfig::omega() const { return unit_sphere_measure(n); }

double SpectralConfig::mode_constant(int mode) const {
  return n == 2 ? static_cast<double>(mode) * mode : mode * (mode + 1.0);
}

double SpectralConfig::mode_curvature(int mode) const {
  const double r2 = inner_radius * inner_radius;
  return ((n - 1) / r2 - mode_constant(mode) / r2) / (n - 1);
}

int SpectralConfig::multiplicity(int mode) const {
  if (n == 2) return mode == 0 ? 1 : 2;
  return 2 * mode + 1;
}

double SpectralConfig::zeta() const {
  const double w = omega();
  const double v1 = w * std::pow(inner_radius, n) / n;
  const double v2 = w * std::pow(outer_radius, n) / n - v1;
  const double area = w * std::pow(inner_radius, n - 1);
  return sigma * u * (kappa1 * v1 + kappa2 * v2) /
         (latent * latent * inner_radius * inner_radius * area);
}

double SpectralConfig::determinant_scale() const {
  return latent * latent + sigma * u * (d1 + d2) / std::pow(inner_radius, 3);
}

RadialTraces radial_traces(const SpectralConfig& cfg, double lambda, int mode) {
  if (!(lambda >= 0.0)) throw Error(ErrorCode::Domain, "lambda must be nonnegative");
  return RadialTraces{side_traces(cfg, lambda, {mode}, true, cfg.radial_nodes)[0],
                      side_traces(cfg, lambda, {mode}, false, cfg.radial_nodes)[0]};
}

std::vector<double> mode_determinants(const SpectralConfig& cfg, double lambda, const std::vector<int>& modes) {
  if (!(lambda >= 0.0)) throw Error(ErrorCode::Domain, "lambda must be nonnegative");
  const auto wi = side_traces(cfg, lambda, modes, true, cfg.radial_nodes);
  const auto wo = side_traces(cfg, lambda, modes, false, cfg.radial_nodes);
  std::vector<double> d(modes.size());
  for (std::size_t j = 0; j < modes.size(); ++j) {
    const double jump = cfg.d2 * wo[j] - cfg.d1 * wi[j];
    const double a = cfg.mode_curvature(modes[j]);
    d[j] = cfg.latent * cfg.latent * lambda - (cfg.gamma * lambda - cfg.sigma * a) * cfg.u * jump;
  }
  return d;
}

double mode_determinant(const SpectralConfig& cfg, double lambda, int mode) {
  return mode_determinants(cfg, lambda, {mode})[0];
}

DispersionResult count_positive_eigenvalues(const SpectralConfig& cfg, bool keep_samples) {
  cfg.validate();
  const int modes = cfg.max_mode + 1;
  DispersionResult res;
  res.zeta = cfg.latent != 0.0 ? cfg.zeta() : std::numeric_limits<double>::infinity();
  res.modes.resize(modes);
  const double scale = cfg.determinant_scale();

  // Below this window the determinant is not yet in its large-lambda regime.
  const double kmax = std::max(cfg.kappa1, cfg.kappa2);
  const double dmin = std::min(cfg.d1, cfg.d2);
  const double dmax = std::max(cfg.d1, cfg.d2);
  const double gap = std::min(cfg.inner_radius, cfg.outer_radius - cfg.inner_radius);
  double asym = 100.0 * dmax / (std::min(cfg.kappa1, cfg.kappa2) * gap * gap);
  if (cfg.latent != 0.0) {
    const double amax = std::abs(cfg.mode_curvature(cfg.max_mode));
    const double t = 4.0 * cfg.sigma * std::max(amax, 1.0 / (cfg.inner_radius * cfg.inner_radius)) *
                     cfg.u * (cfg.d1 + cfg.d2) * std::sqrt(kmax / dmin) /
                     (cfg.latent * cfg.latent);
    asym = std::max(asym, t * t);
  }
  double window = std::max(cfg.lambda_max, asym);

  std::vector<double> lambdas;
  std::vector<std::vector<double>> values(modes);
  const int ppd = cfg.points_per_decade;
  auto grid_point = [&](int j) { return cfg.lambda_min * std::pow(10.0, static_cast<double>(j) / ppd); };

  int decades_done = 0;
  while (true) {
    const int first = decades_done * ppd + (decades_done == 0 ? 0 : 1);
    const int last = (decades_done + 1) * ppd;
    std::vector<double> chunk;
    for (int j = first; j <= last; ++j) chunk.push_back(grid_point(j));
    std::vector<std::vector<double>> vals(chunk.size(), std::vector<double>(modes));
    std::vector<int> all(modes);
    for (int k = 0; k < modes; ++k) all[k] = k;
    parallel_for(chunk.size(), cfg.jobs, [&](std::size_t i) { vals[i] = mode_determinants(cfg, chunk[i], all); });
    for (std::size_t i = 0; i < chunk.size(); ++i) {
      lambdas.push_back(chunk[i]);
      for (int k = 0; k < modes; ++k) values[k].push_back(vals[i][k]);
    }
    ++decades_done;
    const double top = chunk.back();
    bool stable = true;
    for (int k = 0; k < modes && stable; ++k) {
      for (std::size_t i = 0; i < chunk.size(); ++i) {
        if (!(vals[i][k] > 0.0)) {
          stable = false;
          break;
        }
      }
    }
    if (top >= window * (1.0 - 1e-12) && stable) break;
    if (top >= kMaxWindow) {
      throw Error(ErrorCode::NumericalBreakdown,
                  "determinant did not become sign-stable below lambda = 1e12");
    }
  }
  res.lambda_max = lambdas.back();

  for (int k = 0; k < modes; ++k) {
    ModeReport& mr = res.modes[k];
    mr.mode = k;
    mr.multiplicity = cfg.multiplicity(k);
    mr.a_mode = cfg.mode_curvature(k);
    mr.d_near_zero = mode_determinant(cfg, kKernelLambda, k);
    mr.kernel = std::abs(mr.d_near_zero) <= kKernelTol * scale;
    const auto& v = values[k];
    auto f = [&](double lam) { return mode_determinant(cfg, lam, k); };
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
      if (v[i] == 0.0) {
        if (i > 0 && std::signbit(v[i - 1]) != std::signbit(v[i + 1])) {
          mr.roots.push_back({lambdas[i], lambdas[i - 1], lambdas[i + 1], v[i - 1], v[i + 1]});
        }
        continue;
      }
      if (v[i + 1] != 0.0 && std::signbit(v[i]) != std::signbit(v[i + 1])) {
        const double root = roots::brent(f, lambdas[i], lambdas[i + 1], 1e-13 * lambdas[i + 1]);
        mr.roots.push_back({root, lambdas[i], lambdas[i + 1], v[i], v[i + 1]});
      }
      if (i > 0 && std::signbit(v[i - 1]) == std::signbit(v[i]) &&
          std::signbit(v[i]) == std::signbit(v[i + 1]) && std::abs(v[i]) < std::abs(v[i - 1]) &&
          std::abs(v[i]) < std::abs(v[i + 1]) &&
          std::abs(v[i]) < kSuspectRatio * std::min(std::abs(v[i - 1]), std::abs(v[i + 1]))) {
        mr.suspects.push_back(lambdas[i]);
      }
    }
    const std::size_t start = v.size() - static_cast<std::size_t>(ppd) - 1;
    mr.sign_stable = std::all_of(v.begin() + static_cast<std::ptrdiff_t>(start), v.end(),
                                 [](double x) { return x > 0.0; });
    if (keep_samples) {
      mr.lambdas = lambdas;
      mr.values = v;
    }
    res.positive_count += static_cast<int>(mr.roots.size()) * mr.multiplicity;
    if (mr.kernel) res.kernel_dimension += mr.multiplicity;
    res.suspect_count += static_cast<int>(mr.suspects.size());
  }
  for (int k = modes - 1; k >= 0; --k) {
    const auto& mr = res.modes[k];
    if (mr.a_mode < 0.0 && mr.roots.empty() && mr.suspects.empty() && mr.sign_stable) {
      res.cutoff_mode = k;
    } else {
      break;
    }
  }
  return res;
}

}  // namespace stefan
