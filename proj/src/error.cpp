#include "mcflab/error.hpp"

namespace mcflab {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::InvalidImmersion: return "InvalidImmersion";
    case Errc::DegenerateGeometry: return "DegenerateGeometry";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::UnsupportedRepresentation: return "UnsupportedRepresentation";
    case Errc::BadShapeParameters: return "BadShapeParameters";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::UnregisteredNorm: return "UnregisteredNorm";
    case Errc::InsufficientSamples: return "InsufficientSamples";
    case Errc::WindowOutOfRange: return "WindowOutOfRange";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::NonConsecutiveFrames: return "NonConsecutiveFrames";
    case Errc::RedistributionActive: return "RedistributionActive";
    case Errc::NonPositiveH: return "NonPositiveH";
    case Errc::DimensionTooSmall: return "DimensionTooSmall";
    case Errc::NonPositiveInputs: return "NonPositiveInputs";
    case Errc::TrajectoryTooShort: return "TrajectoryTooShort";
  }
  return "Unknown";
}

}  // namespace mcflab
