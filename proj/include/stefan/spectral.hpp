#pragma once

// Eigenvalues of the linearization at a spherical equilibrium.
//
// Concentric case: per angular mode the eigenvalue problem reduces to two
// radial two-point problems and a scalar determinant. Multi-disc case (n = 2):
// a finite-difference Neumann-to-Dirichlet map N_lambda on the interface and
// the operator B_lambda = (l^2/u) lambda N_lambda + gamma lambda - sigma A*.

#include "stefan/thermo.hpp"

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace stefan {

struct SpectralConfig {
  int n = 2;
  double inner_radius = 1.0;  // R*
  double outer_radius = 3.0;  // R_out
  double u = 1.0;
  double kappa1 = 1.0, kappa2 = 1.0;
  double d1 = 1.0, d2 = 1.0;
  double latent = 1.0;  // l*
  double gamma = 0.0;
  double sigma = 1.0;
  int max_mode = 8;
  double lambda_min = 1e-6;
  double lambda_max = 0.0;  // 0 selects the window automatically
  int points_per_decade = 512;
  int radial_nodes = 2000;
  bool richardson = true;
  int jobs = 1;

  // Equilibrium data at temperature u: R* = sigma / h(u), coefficients from the model.
  static SpectralConfig from_equilibrium(const FreeEnergyModel& model, int n, double sigma,
                                         double u, double outer_radius);

  void validate() const;
  double omega() const;
  double mode_constant(int mode) const;  // k^2 or l(l+1)
  double mode_curvature(int mode) const;  // eigenvalue a_mode of A*
  int multiplicity(int mode) const;
  double zeta() const;
  // Magnitude used to judge determinant values: l^2 + sigma u (d1 + d2) / R^3.
  double determinant_scale() const;
};

// Radial log-derivatives v'(R*)/v(R*) of the inner (regular at 0) and outer
// (Neumann at R_out) solutions of kappa lambda v = d (v'' + (n-1)/r v' - c/r^2 v).
struct RadialTraces {
  double inner;
  double outer;
};

RadialTraces radial_traces(const SpectralConfig& cfg, double lambda, int mode);

// l* D(lambda, mode) with D the compatibility determinant of the Gibbs-Thomson
// and Stefan rows. The factor l* keeps the value finite when l* = 0 and makes
// the large-lambda sign positive.
double mode_determinant(const SpectralConfig& cfg, double lambda, int mode);
std::vector<double> mode_determinants(const SpectralConfig& cfg, double lambda, const std::vector<int>& modes);

struct LocatedEigenvalue {
  double lambda;
  double lo, hi;
  double d_lo, d_hi;
};

struct ModeReport {
  int mode = 0;
  int multiplicity = 1;
  double a_mode = 0.0;
  double d_near_zero = 0.0;  // determinant at lambda = 1e-10
  bool kernel = false;
  std::vector<LocatedEigenvalue> roots;
  std::vector<double> suspects;  // local minima of |D| without a sign change
  bool sign_stable = false;      // sign constant and positive over the last decade
  std::vector<double> lambdas;
  std::vector<double> values;
};

struct DispersionResult {
  std::vector<ModeReport> modes;
  double lambda_max = 0.0;
  int positive_count = 0;  // with multiplicity
  int kernel_dimension = 0;
  int suspect_count = 0;
  int cutoff_mode = -1;  // first mode from which a_mode < 0 and no roots are found
  double zeta = 0.0;
};

DispersionResult count_positive_eigenvalues(const SpectralConfig& cfg, bool keep_samples = false);

struct MultiDiscConfig {
  double width = 3.0, height = 3.0;
  std::vector<std::array<double, 2>> centers;
  double radius = 0.5;
  int grid = 160;        // cells per side
  int quadrature = 64;   // interface points per circle
  int subsample = 8;     // area-fraction subsampling per cell side
  double u = 1.0;
  double kappa1 = 1.0, kappa2 = 1.0;
  double d1 = 1.0, d2 = 1.0;
  double latent = 1.0;
  double gamma = 0.0;
  double sigma = 1.0;
  double lambda_min = 1e-4;
  int points_per_decade = 16;
  double lambda_max = 0.0;

  void validate() const;
  double interface_measure() const;
  double heat_capacity_integral() const;  // (kappa|1)_Omega
  double zeta() const;
};

struct NtdResult {
  Eigen::MatrixXd matrix;  // (mM) x (mM)
  Eigen::VectorXd weights;
  double norm;         // largest eigenvalue of the weighted symmetric part
  double asymmetry;    // |W N - (W N)^T| / |W N|
  double min_eigenvalue;
  double discrete_heat_capacity;  // sum of kappa over control volumes
};

NtdResult ntd_matrix(const MultiDiscConfig& cfg, double lambda);

struct BSpectrum {
  double lambda;
  Eigen::VectorXd eigenvalues;  // ascending
  int negative_count;
};

BSpectrum b_lambda_spectrum(const MultiDiscConfig& cfg, double lambda);
BSpectrum b_lambda_spectrum(const MultiDiscConfig& cfg, const NtdResult& ntd, double lambda);

struct BScan {
  std::vector<double> lambdas;
  std::vector<double> smallest;
  std::vector<int> negative_counts;
  int crossings = 0;
  double lambda_max = 0.0;
};

BScan scan_b_lambda(const MultiDiscConfig& cfg);

}  // namespace stefan
