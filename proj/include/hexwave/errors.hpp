#pragma once

#include <stdexcept>
#include <string>

namespace hexwave {

// Base of every error raised by the library. Subclasses name the violated
// contract so callers (and the CLI) can map them to diagnostics.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define HEXWAVE_DEFINE_ERROR(Name)                                  \
    class Name : public Error {                                     \
    public:                                                         \
        explicit Name(const std::string& what) : Error(what) {}     \
    };

HEXWAVE_DEFINE_ERROR(DomainError)
HEXWAVE_DEFINE_ERROR(GeometryError)
HEXWAVE_DEFINE_ERROR(TopologyError)
HEXWAVE_DEFINE_ERROR(StabilityUndefinedError)
HEXWAVE_DEFINE_ERROR(InfeasibleEquilibriumError)
HEXWAVE_DEFINE_ERROR(BallastInfeasibleError)
HEXWAVE_DEFINE_ERROR(OverMassedError)
HEXWAVE_DEFINE_ERROR(ThinWallViolationError)
HEXWAVE_DEFINE_ERROR(ResolutionError)
HEXWAVE_DEFINE_ERROR(ClusteringDegenerateError)
HEXWAVE_DEFINE_ERROR(CalibrationInfeasibleError)
HEXWAVE_DEFINE_ERROR(ModelAssemblyError)
HEXWAVE_DEFINE_ERROR(InstabilityError)
HEXWAVE_DEFINE_ERROR(CoverageError)
HEXWAVE_DEFINE_ERROR(UndefinedCwrError)
HEXWAVE_DEFINE_ERROR(ValidationError)
HEXWAVE_DEFINE_ERROR(ParseError)

#undef HEXWAVE_DEFINE_ERROR

}  // namespace hexwave
