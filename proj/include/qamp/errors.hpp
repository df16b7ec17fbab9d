#pragma once

#include <stdexcept>
#include <string>

namespace qamp {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define QAMP_ERROR(Name)                                  \
  struct Name : Error {                                   \
    explicit Name(const std::string& msg)                 \
        : Error(std::string(#Name) + ": " + msg) {}       \
  }

QAMP_ERROR(NotHermitian);
QAMP_ERROR(DimensionTooLarge);
QAMP_ERROR(DimensionMismatch);
QAMP_ERROR(NoConvergence);
QAMP_ERROR(EmptySubspace);
QAMP_ERROR(BadSupport);
QAMP_ERROR(ParseError);
QAMP_ERROR(LayerOutOfRange);
QAMP_ERROR(NoLayers);
QAMP_ERROR(BadSector);
QAMP_ERROR(InvalidRegime);
QAMP_ERROR(InvalidLambda);
QAMP_ERROR(Disconnected);
QAMP_ERROR(EnumerationTooLarge);
QAMP_ERROR(Infeasible);
QAMP_ERROR(InexactTheta);
QAMP_ERROR(AllProjectedOut);
QAMP_ERROR(NotTwoLayers);

#undef QAMP_ERROR

}  // namespace qamp
