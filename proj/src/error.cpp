#include "orbitred/error.hpp"

namespace orbitred {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DependentLatticeGenerator: return "DependentLatticeGenerator";
    case ErrorCode::NonDiscrete: return "NonDiscrete";
    case ErrorCode::SingularBasis: return "SingularBasis";
    case ErrorCode::WindowTooSmall: return "WindowTooSmall";
    case ErrorCode::MarkerPropertiesViolated: return "MarkerPropertiesViolated";
    case ErrorCode::InfeasibleShift: return "InfeasibleShift";
    case ErrorCode::EdgeTooShort: return "EdgeTooShort";
    case ErrorCode::SeparationInfeasible: return "SeparationInfeasible";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::UnsatisfiableConstraints: return "UnsatisfiableConstraints";
    case ErrorCode::AuditFailed: return "AuditFailed";
    case ErrorCode::RegionNotRect: return "RegionNotRect";
    case ErrorCode::PointOutsideSafeInterior: return "PointOutsideSafeInterior";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::ConfigParseError: return "ConfigParseError";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace orbitred
