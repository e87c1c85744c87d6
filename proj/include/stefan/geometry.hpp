#pragma once

// Height functions over a reference sphere and the interface geometry built
// from them: Weingarten map, mean curvature (nonlinear and linearized),
// normal velocity and enclosed volume.
//
// Sign convention: the normal points out of the enclosed ball and the mean
// curvature of a sphere of radius R is -1/R.

#include <array>
#include <string>
#include <vector>

namespace stefan {

struct SphereChart {
  int n = 2;
  double radius = 1.0;
  std::array<double, 3> center{0.0, 0.0, 0.0};
  double half_width = 0.5;  // tubular half-width a

  // a = R/2, the largest value allowed for an isolated sphere.
  static SphereChart centered(int n, double radius);
  void validate() const;
};

struct WeingartenMap {
  std::vector<double> principal_curvatures;
  double trace;
  double norm;  // spectral norm
};

WeingartenMap weingarten(const SphereChart& chart);

// Angular grid sample of a height function and its angular derivatives.
// For n = 2 only theta is used (d_p, d_tp, d_pp are zero).
struct GridSample {
  double theta;
  double phi;
  double weight;  // quadrature weight for the unit sphere measure
  double value;
  double d_t, d_p;
  double d_tt, d_tp, d_pp;
};

class HeightField {
 public:
  // Circle: rho(theta) = sum_k cos_k cos(k theta) + sin_k sin(k theta).
  static HeightField circle(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs,
                            int grid_points = 0);
  // Sphere: real orthonormal spherical harmonics up to `degree`, coefficient
  // of (l, m) stored at l*l + l + m.
  static HeightField sphere(int degree, std::vector<double> coeffs, int n_theta = 0,
                            int n_phi = 0);
  static HeightField constant(int n, double c, int max_mode = 16);

  static std::size_t sphere_index(int l, int m) { return static_cast<std::size_t>(l * l + l + m); }

  int dimension() const { return n_; }
  int max_mode() const { return max_mode_; }
  const std::vector<GridSample>& grid() const { return grid_; }
  const std::vector<double>& cos_coeffs() const { return cos_; }
  const std::vector<double>& sin_coeffs() const { return sin_; }
  const std::vector<double>& sphere_coeffs() const { return sh_; }
  int n_theta() const { return n_theta_; }
  int n_phi() const { return n_phi_; }

  double sup_norm() const { return sup_; }
  double gradient_sup_norm(double radius) const;

  HeightField scaled(double factor) const;

 private:
  HeightField() = default;
  void build_grid();

  int n_ = 2;
  int max_mode_ = 0;
  std::vector<double> cos_, sin_, sh_;
  int n_theta_ = 0, n_phi_ = 0;
  std::vector<GridSample> grid_;
  double sup_ = 0.0;
};

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int count, std::vector<double>& nodes, std::vector<double>& weights);

// Pointwise H(rho) on the field's grid. Throws PerturbationTooLarge outside
// |rho| <= a, |grad rho| <= 1/8.
std::vector<double> mean_curvature(const SphereChart& chart, const HeightField& rho);

// Eigenvalue of H'(0) on a mode: (1/(n-1)) ((n-1)/R^2 - c/R^2), c = k^2 or l(l+1).
double linearized_mode_eigenvalue(int n, double radius, int mode);

// H'(0) rho as a modal field on the same grid as rho.
HeightField linearized_curvature(const SphereChart& chart, const HeightField& rho);

// V = beta(rho) rho_t pointwise.
std::vector<double> normal_velocity(const SphereChart& chart, const HeightField& rho,
                                    const HeightField& rho_t);

struct SurfaceMeasure {
  double area;
  double volume;
};

SurfaceMeasure surface_measure_and_volume(const SphereChart& chart, const HeightField& rho);

}  // namespace stefan
