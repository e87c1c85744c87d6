#pragma once

// The work behind each subcommand. A task returns its JSON summary and CSV
// tables; the caller decides where they go.

#include "stefan/config.hpp"
#include "stefan/report.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace stefan {

struct TaskOutput {
  Json summary;
  std::vector<std::pair<std::string, CsvTable>> tables;  // file name, table
  // Set when a simulation stopped on an obstruction; outputs are still valid.
  std::optional<ErrorCode> stop_code;
};

TaskOutput run_equilibria_task(const RunConfig& cfg);
TaskOutput run_spectrum_task(const RunConfig& cfg, int jobs);
TaskOutput run_simulate_task(const RunConfig& cfg);
TaskOutput run_ripening_task(const RunConfig& cfg);

// Stable equilibrium (u, R) of a single sphere reached from energy E0 in the
// ball of radius r_out; nullopt when there is none.
struct FrontLimit {
  double u;
  double radius;
  double zeta;
};
std::optional<FrontLimit> stable_front_limit(const FreeEnergyModel& model, int n, double r_out, double sigma,
                                             double energy);

}  // namespace stefan
