#pragma once

#include <stdexcept>
#include <string>

namespace vsrd {

// One exception type per failure class, all rooted at Error so callers can
// catch coarsely.  Configuration problems are kept apart from numerical
// failures because the command layer maps them to different exit codes.

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define VSRD_DEFINE_ERROR(Name)                                    \
  class Name : public Error {                                      \
   public:                                                         \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  }

VSRD_DEFINE_ERROR(InvalidNetwork);
VSRD_DEFINE_ERROR(SingularNetwork);
VSRD_DEFINE_ERROR(DisconnectedNetwork);
VSRD_DEFINE_ERROR(NonPositiveKernel);
VSRD_DEFINE_ERROR(InvalidGeometry);
VSRD_DEFINE_ERROR(UnknownBoundary);
VSRD_DEFINE_ERROR(GeometryMismatch);
VSRD_DEFINE_ERROR(LayoutMismatch);
VSRD_DEFINE_ERROR(NonConservative);
VSRD_DEFINE_ERROR(LinearSolveFailure);
VSRD_DEFINE_ERROR(KernelDimensionError);
VSRD_DEFINE_ERROR(NoConvergence);
VSRD_DEFINE_ERROR(NonpositiveEquilibrium);
VSRD_DEFINE_ERROR(InsufficientData);
VSRD_DEFINE_ERROR(EigensolveFailure);
VSRD_DEFINE_ERROR(InfeasibleEpsilons);
VSRD_DEFINE_ERROR(ConfigError);
VSRD_DEFINE_ERROR(IoError);

#undef VSRD_DEFINE_ERROR

}  // namespace vsrd
