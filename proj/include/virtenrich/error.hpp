#ifndef VIRTENRICH_ERROR_HPP
#define VIRTENRICH_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace virtenrich {

enum class ErrorCode {
  NonConforming,
  DegenerateCell,
  IndexOutOfRange,
  AmbiguousGeometry,
  UnsupportedDegree,
  SingularGram,
  UnsupportedOrder,
  BoundaryFacet,
  MeshMismatch,
  NoEligibleCell,
  SingularEdgeSystem,
  SingularInterpolation,
  SingularDihedral,
  InconsistentEdgeTraces,
  IncompatiblePair,
  SingularSystem,
  DegenerateSample,
  ParseError,
  IoError,
  UsageError,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying one of the library's error codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace virtenrich

#endif  // VIRTENRICH_ERROR_HPP
