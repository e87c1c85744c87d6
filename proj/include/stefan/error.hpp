#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace stefan {

enum class ErrorCode {
  Domain,
  InvalidModel,
  NoMeltingPoint,
  NoAdmissibleRadius,
  OutOfRange,
  DegenerateLatentHeat,
  NoAdmissibleRange,
  PerturbationTooLarge,
  NumericalBreakdown,
  WellPosednessLost,
  TemperaturePositivityLost,
  GeometryEvent,
  EnergyClosureFailed,
  Config,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Process exit code for the command-line tool.
int exit_code_for(ErrorCode code);

}  // namespace stefan
