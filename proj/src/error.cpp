#include "virtenrich/error.hpp"

namespace virtenrich {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonConforming: return "NonConforming";
    case ErrorCode::DegenerateCell: return "DegenerateCell";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::AmbiguousGeometry: return "AmbiguousGeometry";
    case ErrorCode::UnsupportedDegree: return "UnsupportedDegree";
    case ErrorCode::SingularGram: return "SingularGram";
    case ErrorCode::UnsupportedOrder: return "UnsupportedOrder";
    case ErrorCode::BoundaryFacet: return "BoundaryFacet";
    case ErrorCode::MeshMismatch: return "MeshMismatch";
    case ErrorCode::NoEligibleCell: return "NoEligibleCell";
    case ErrorCode::SingularEdgeSystem: return "SingularEdgeSystem";
    case ErrorCode::SingularInterpolation: return "SingularInterpolation";
    case ErrorCode::SingularDihedral: return "SingularDihedral";
    case ErrorCode::InconsistentEdgeTraces: return "InconsistentEdgeTraces";
    case ErrorCode::IncompatiblePair: return "IncompatiblePair";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::DegenerateSample: return "DegenerateSample";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::UsageError: return "UsageError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace virtenrich
