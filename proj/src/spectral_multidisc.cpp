#include "stefan/error.hpp"
#include "stefan/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace stefan {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNegativeTol = 1e-10;
constexpr double kMaxScanLambda = 1e8;

struct Grid2D {
  int nx, ny;
  double hx, hy;
  int index(int i, int j) const { return j * (nx + 1) + i; }
  int nodes() const { return (nx + 1) * (ny + 1); }
};

bool inside(const MultiDiscConfig& cfg, double x, double y) {
  for (const auto& c : cfg.centers) {
    const double dx = x - c[0], dy = y - c[1];
    if (dx * dx + dy * dy < cfg.radius * cfg.radius) return true;
  }
  return false;
}

// Length of the part of the axis-aligned segment [a, b] (along `axis` at
// fixed coordinate `fixed`) that lies inside the discs.
double inside_length(const MultiDiscConfig& cfg, int axis, double fixed, double a, double b) {
  double len = 0.0;
  for (const auto& c : cfg.centers) {
    const double off = fixed - c[1 - axis];
    if (std::abs(off) >= cfg.radius) continue;
    const double half = std::sqrt(cfg.radius * cfg.radius - off * off);
    const double lo = std::max(a, c[axis] - half);
    const double hi = std::min(b, c[axis] + half);
    if (hi > lo) len += hi - lo;
  }
  return len;
}

struct Assembly {
  Eigen::SparseMatrix<double> stiffness;
  Eigen::VectorXd capacity;  // kappa-weighted control-volume areas
  Eigen::SparseMatrix<double> trace;  // P: interface points x nodes (bilinear)
  double weight;             // interface quadrature weight 2 pi R / M
};

Assembly assemble(const MultiDiscConfig& cfg) {
  Grid2D g{cfg.grid, cfg.grid, cfg.width / cfg.grid, cfg.height / cfg.grid};
  const int nn = g.nodes();
  Assembly as;
  as.capacity.resize(nn);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(nn) * 5);
  const int s = cfg.subsample;
  for (int j = 0; j <= g.ny; ++j) {
    for (int i = 0; i <= g.nx; ++i) {
      const double x = i * g.hx, y = j * g.hy;
      const double x0 = std::max(0.0, x - 0.5 * g.hx), x1 = std::min(cfg.width, x + 0.5 * g.hx);
      const double y0 = std::max(0.0, y - 0.5 * g.hy), y1 = std::min(cfg.height, y + 0.5 * g.hy);
      int in = 0;
      for (int a = 0; a < s; ++a) {
        for (int b = 0; b < s; ++b) {
          if (inside(cfg, x0 + (a + 0.5) * (x1 - x0) / s, y0 + (b + 0.5) * (y1 - y0) / s)) ++in;
        }
      }
      const double frac = static_cast<double>(in) / (s * s);
      as.capacity[g.index(i, j)] =
          (frac * cfg.kappa1 + (1.0 - frac) * cfg.kappa2) * (x1 - x0) * (y1 - y0);
    }
  }
  auto add_edge = [&](int p, int q, double conductance) {
    trip.emplace_back(p, p, conductance);
    trip.emplace_back(q, q, conductance);
    trip.emplace_back(p, q, -conductance);
    trip.emplace_back(q, p, -conductance);
  };
  auto effective_d = [&](double frac) { return 1.0 / (frac / cfg.d1 + (1.0 - frac) / cfg.d2); };
  for (int j = 0; j <= g.ny; ++j) {
    const double y = j * g.hy;
    const double face = (j == 0 || j == g.ny) ? 0.5 * g.hy : g.hy;
    for (int i = 0; i < g.nx; ++i) {
      const double a = i * g.hx;
      const double frac = inside_length(cfg, 0, y, a, a + g.hx) / g.hx;
      add_edge(g.index(i, j), g.index(i + 1, j), face * effective_d(frac) / g.hx);
    }
  }
  for (int i = 0; i <= g.nx; ++i) {
    const double x = i * g.hx;
    const double face = (i == 0 || i == g.nx) ? 0.5 * g.hx : g.hx;
    for (int j = 0; j < g.ny; ++j) {
      const double a = j * g.hy;
      const double frac = inside_length(cfg, 1, x, a, a + g.hy) / g.hy;
      add_edge(g.index(i, j), g.index(i, j + 1), face * effective_d(frac) / g.hy);
    }
  }
  as.stiffness.resize(nn, nn);
  as.stiffness.setFromTriplets(trip.begin(), trip.end());

  const int M = cfg.quadrature;
  const int total = M * static_cast<int>(cfg.centers.size());
  std::vector<Eigen::Triplet<double>> ptrip;
  ptrip.reserve(static_cast<std::size_t>(total) * 4);
  for (std::size_t c = 0; c < cfg.centers.size(); ++c) {
    for (int q = 0; q < M; ++q) {
      const double th = 2.0 * kPi * q / M;
      const double x = cfg.centers[c][0] + cfg.radius * std::cos(th);
      const double y = cfg.centers[c][1] + cfg.radius * std::sin(th);
      const int i = std::min(g.nx - 1, static_cast<int>(std::floor(x / g.hx)));
      const int j = std::min(g.ny - 1, static_cast<int>(std::floor(y / g.hy)));
      const double tx = x / g.hx - i, ty = y / g.hy - j;
      const int row = static_cast<int>(c) * M + q;
      ptrip.emplace_back(row, g.index(i, j), (1 - tx) * (1 - ty));
      ptrip.emplace_back(row, g.index(i + 1, j), tx * (1 - ty));
      ptrip.emplace_back(row, g.index(i, j + 1), (1 - tx) * ty);
      ptrip.emplace_back(row, g.index(i + 1, j + 1), tx * ty);
    }
  }
  as.trace.resize(total, nn);
  as.trace.setFromTriplets(ptrip.begin(), ptrip.end());
  as.weight = 2.0 * kPi * cfg.radius / M;
  return as;
}

// Periodic spectral second-derivative matrix on M equispaced points (M even).
Eigen::MatrixXd fourier_second_derivative(int M) {
  Eigen::MatrixXd D(M, M);
  const double h = 2.0 * kPi / M;
  for (int j = 0; j < M; ++j) {
    for (int l = 0; l < M; ++l) {
      if (j == l) {
        D(j, l) = -kPi * kPi / (3.0 * h * h) - 1.0 / 6.0;
      } else {
        const double s = std::sin((j - l) * h / 2.0);
        D(j, l) = -(((j - l) % 2 == 0) ? 1.0 : -1.0) / (2.0 * s * s);
      }
    }
  }
  return D;
}

}  // namespace

void MultiDiscConfig::validate() const {
  if (!(width > 0.0) || !(height > 0.0)) throw Error(ErrorCode::Config, "multi_disc: bad rectangle");
  if (centers.empty()) throw Error(ErrorCode::Config, "multi_disc: need at least one disc");
  if (!(radius > 0.0)) throw Error(ErrorCode::Config, "multi_disc: radius must be positive");
  for (std::size_t a = 0; a < centers.size(); ++a) {
    const auto& c = centers[a];
    if (c[0] - radius <= 0.0 || c[0] + radius >= width || c[1] - radius <= 0.0 ||
        c[1] + radius >= height) {
      throw Error(ErrorCode::Config, "multi_disc: discs must lie strictly inside the rectangle");
    }
    for (std::size_t b = a + 1; b < centers.size(); ++b) {
      if (std::hypot(c[0] - centers[b][0], c[1] - centers[b][1]) <= 2.0 * radius) {
        throw Error(ErrorCode::Config, "multi_disc: discs must be pairwise disjoint");
      }
    }
  }
  if (grid < 8 || std::max(width, height) / grid > radius / 10.0) {
    throw Error(ErrorCode::Config, "multi_disc: grid must resolve R*/10");
  }
  if (quadrature < 8 || quadrature % 2 != 0) {
    throw Error(ErrorCode::Config, "multi_disc: quadrature must be even and >= 8");
  }
  if (subsample < 1) throw Error(ErrorCode::Config, "multi_disc: subsample must be >= 1");
  if (!(u > 0.0) || !(kappa1 > 0.0) || !(kappa2 > 0.0) || !(d1 > 0.0) || !(d2 > 0.0) ||
      !(gamma >= 0.0) || !(sigma > 0.0)) {
    throw Error(ErrorCode::Config, "multi_disc: coefficients violate sign conditions");
  }
  if (gamma == 0.0 && latent == 0.0) {
    throw Error(ErrorCode::WellPosednessLost, "multi_disc: l* = 0 with gamma* = 0");
  }
}

double MultiDiscConfig::interface_measure() const {
  return 2.0 * kPi * radius * static_cast<double>(centers.size());
}

double MultiDiscConfig::heat_capacity_integral() const {
  const double inner = kPi * radius * radius * static_cast<double>(centers.size());
  return kappa1 * inner + kappa2 * (width * height - inner);
}

double MultiDiscConfig::zeta() const {
  return sigma * u * heat_capacity_integral() /
         (latent * latent * radius * radius * interface_measure());
}

NtdResult ntd_matrix(const MultiDiscConfig& cfg, double lambda) {
  cfg.validate();
  if (!(lambda >= 0.0)) throw Error(ErrorCode::Domain, "lambda must be nonnegative");
  const Assembly as = assemble(cfg);
  const int nn = static_cast<int>(as.capacity.size());
  const int total = static_cast<int>(as.trace.rows());
  const double w = as.weight;

  Eigen::SparseMatrix<double> K = as.stiffness;
  Eigen::MatrixXd rhs = Eigen::MatrixXd(as.trace.transpose()) * w;
  Eigen::MatrixXd proj = Eigen::MatrixXd::Identity(total, total);
  if (lambda > 0.0) {
    for (int i = 0; i < nn; ++i) K.coeffRef(i, i) += lambda * as.capacity[i];
  } else {
    // Pure Neumann problem: mean-zero data, node 0 pinned, traces normalized to
    // interface mean zero.
    proj -= Eigen::MatrixXd::Constant(total, total, 1.0 / total);
    rhs = rhs * proj;
    for (Eigen::SparseMatrix<double>::InnerIterator it(K, 0); it; ++it) it.valueRef() = 0.0;
    for (int k = 0; k < K.outerSize(); ++k) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(K, k); it; ++it) {
        if (it.row() == 0 && it.col() != 0) it.valueRef() = 0.0;
      }
    }
    K.coeffRef(0, 0) = 1.0;
    rhs.row(0).setZero();
  }
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(K);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NumericalBreakdown, "factorization of the transmission problem failed");
  }
  const Eigen::MatrixXd X = solver.solve(rhs);
  if (solver.info() != Eigen::Success || !X.allFinite()) {
    throw Error(ErrorCode::NumericalBreakdown, "solve of the transmission problem failed");
  }
  NtdResult res;
  res.matrix = as.trace * X;
  if (lambda == 0.0) res.matrix = proj.transpose() * res.matrix;
  res.weights = Eigen::VectorXd::Constant(total, w);
  res.discrete_heat_capacity = as.capacity.sum();

  const Eigen::MatrixXd wn = w * res.matrix;
  const double wn_norm = wn.norm();
  res.asymmetry = wn_norm > 0.0 ? (wn - wn.transpose()).norm() / wn_norm : 0.0;
  const Eigen::MatrixXd sym = 0.5 * (res.matrix + res.matrix.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
  res.norm = es.eigenvalues().cwiseAbs().maxCoeff();
  res.min_eigenvalue = es.eigenvalues().minCoeff();
  return res;
}

BSpectrum b_lambda_spectrum(const MultiDiscConfig& cfg, const NtdResult& ntd, double lambda) {
  if (!(lambda > 0.0)) throw Error(ErrorCode::Domain, "B_lambda needs lambda > 0");
  const int M = cfg.quadrature;
  const int total = static_cast<int>(ntd.matrix.rows());
  const Eigen::MatrixXd D2 = fourier_second_derivative(M);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(total, total);
  const double r2 = cfg.radius * cfg.radius;
  for (int c = 0; c * M < total; ++c) {
    A.block(c * M, c * M, M, M) = (Eigen::MatrixXd::Identity(M, M) + D2) / r2;
  }
  Eigen::MatrixXd B = (cfg.latent * cfg.latent / cfg.u) * lambda * ntd.matrix +
                      cfg.gamma * lambda * Eigen::MatrixXd::Identity(total, total) -
                      cfg.sigma * A;
  B = 0.5 * (B + B.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B, Eigen::EigenvaluesOnly);
  BSpectrum out;
  out.lambda = lambda;
  out.eigenvalues = es.eigenvalues();
  const double tol = kNegativeTol * out.eigenvalues.cwiseAbs().maxCoeff();
  out.negative_count = static_cast<int>((out.eigenvalues.array() < -tol).count());
  return out;
}

BSpectrum b_lambda_spectrum(const MultiDiscConfig& cfg, double lambda) {
  return b_lambda_spectrum(cfg, ntd_matrix(cfg, lambda), lambda);
}

BScan scan_b_lambda(const MultiDiscConfig& cfg) {
  cfg.validate();
  BScan scan;
  const double window = std::max(cfg.lambda_max, 1.0);
  const int ppd = cfg.points_per_decade;
  int j = 0;
  int zero_run = 0;
  while (true) {
    const double lambda = cfg.lambda_min * std::pow(10.0, static_cast<double>(j) / ppd);
    const auto spec = b_lambda_spectrum(cfg, lambda);
    scan.lambdas.push_back(lambda);
    scan.smallest.push_back(spec.eigenvalues[0]);
    scan.negative_counts.push_back(spec.negative_count);
    zero_run = spec.negative_count == 0 ? zero_run + 1 : 0;
    if (lambda >= window && zero_run > ppd) break;
    if (lambda > kMaxScanLambda) {
      throw Error(ErrorCode::NumericalBreakdown, "B_lambda did not become nonnegative below 1e8");
    }
    ++j;
  }
  for (std::size_t i = 0; i + 1 < scan.negative_counts.size(); ++i) {
    scan.crossings += std::abs(scan.negative_counts[i + 1] - scan.negative_counts[i]);
  }
  scan.lambda_max = scan.lambdas.back();
  return scan;
}

}  // namespace stefan
