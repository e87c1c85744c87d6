#pragma once

// Run configuration: a YAML document with fixed sections. Unknown keys are
// rejected, every number must be finite, and serialize() writes the canonical
// form that parse_config() reads back unchanged.

#include "stefan/equilibria.hpp"
#include "stefan/error.hpp"
#include "stefan/thermo.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace stefan {

struct MaterialSection {
  EnergyFamily family = EnergyFamily::EqualHeatCapacity;
  double a1 = 0.0, b1 = 0.0, a2 = 0.0, b2 = 0.0;
  double kappa1 = 1.0, kappa2 = 1.0;  // equal for EqualHeatCapacity ("kappa")
  double d1 = 1.0, d2 = 1.0;
  double gamma = 0.0;
  double u_lo = 1e-3, u_hi = 1e3;

  FreeEnergyModel build() const;
};

struct ProblemSection {
  double sigma = 1.0;
  int spheres = 1;
  // Exactly one of energy / temperature; temperature means E0 = phi(u).
  std::optional<double> energy;
  std::optional<double> temperature;
};

struct EquilibriaTask {
  int samples = 200;
};

struct ConcentricSpectrum {
  int max_mode = 8;
  double lambda_min = 1e-6;
  double lambda_max = 0.0;
  int points_per_decade = 512;
  int radial_nodes = 2000;
};

struct MultiDiscSpectrum {
  double width = 3.0, height = 3.0;
  std::vector<std::array<double, 2>> centers;
  int grid = 160;
  int quadrature = 64;
  int subsample = 8;
  double lambda_min = 1e-4;
  double lambda_max = 0.0;
  int points_per_decade = 16;
};

struct SpectrumTask {
  double temperature = 1.0;  // u*; R* = sigma / h(u*)
  std::optional<ConcentricSpectrum> concentric;
  std::optional<MultiDiscSpectrum> multidisc;
};

struct SimulateTask {
  double s0 = 1.0;
  double u_bulk = 1.0;
  std::optional<double> energy;
  double jitter = 0.0;  // relative random perturbation of s0
  double bump_width = 0.25;
  int inner_cells = 200, outer_cells = 200;
  double cfl = 0.2;
  double dt_min = 1e-10, dt_max = 1e-2, dt_initial = 1e-4;
  double t_end = 1.0;
  long max_steps = 10000000;
  double bound = 1e6;
  int record_every = 1;
};

struct RipeningTask {
  std::vector<double> radii;
  double jitter = 0.0;
  double temperature = 1.0;  // u0, fixes E0 unless energy is given
  std::optional<double> energy;
  double dt = 1e-3;
  double t_end = 1.0;
  double collapse_radius = 1e-3;
  int record_every = 1;
};

struct CheckTask {
  std::vector<std::string> suites;
};

struct RunConfig {
  MaterialSection material;
  DomainSpec domain;
  ProblemSection problem;
  std::optional<EquilibriaTask> equilibria;
  std::optional<SpectrumTask> spectrum;
  std::optional<SimulateTask> simulate;
  std::optional<RipeningTask> ripening;
  std::optional<CheckTask> check;
  std::string output_dir = "out";
  std::uint64_t seed = 0;

  // Outer radius of the ball with the domain's volume.
  double outer_radius() const;
  EquilibriumProblem equilibrium_problem() const;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<std::string> errors_;
};

RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

std::string serialize(const RunConfig& cfg);

// Shortest decimal that reads back to the same double.
std::string format_number(double x);

}  // namespace stefan
