#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace orbitred {

enum class ErrorCode {
  DimensionMismatch,
  DependentLatticeGenerator,
  NonDiscrete,
  SingularBasis,
  WindowTooSmall,
  MarkerPropertiesViolated,
  InfeasibleShift,
  EdgeTooShort,
  SeparationInfeasible,
  PreconditionViolated,
  UnsatisfiableConstraints,
  AuditFailed,
  RegionNotRect,
  PointOutsideSafeInterior,
  LengthMismatch,
  UnsupportedDimension,
  ConfigParseError,
  ParseError,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace orbitred
