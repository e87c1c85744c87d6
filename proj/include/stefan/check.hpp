#pragma once

// Invariant suites run from a config: each item records the measured value
// against its tolerance.

#include "stefan/config.hpp"
#include "stefan/report.hpp"

#include <string>
#include <vector>

namespace stefan {

struct CheckItem {
  std::string suite;
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct CheckReport {
  std::vector<CheckItem> items;
  std::vector<std::string> warnings;

  bool passed() const;
  int exit_code() const { return passed() ? 0 : 1; }
  Json to_json() const;
};

CheckReport run_check_suite(const RunConfig& cfg, int jobs = 1);

}  // namespace stefan
