#pragma once

#include <stdexcept>
#include <string>

namespace krein {

/// Base class for every failure raised by the library. The CLI maps these to
/// exit status 3 (model/precondition failure).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define KREIN_DEFINE_ERROR(Name)                                  \
  class Name : public Error {                                     \
   public:                                                        \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  }

KREIN_DEFINE_ERROR(InvalidArgument);
KREIN_DEFINE_ERROR(InvalidModel);

// finite-dimensional engine
KREIN_DEFINE_ERROR(SingularShift);
KREIN_DEFINE_ERROR(NonInvertibleW);
KREIN_DEFINE_ERROR(InvertibleW);
KREIN_DEFINE_ERROR(QPlusWSingular);

// kernels and point models
KREIN_DEFINE_ERROR(ZeroSeparation);
KREIN_DEFINE_ERROR(CoincidentShift);
KREIN_DEFINE_ERROR(CoincidentCenters);
KREIN_DEFINE_ERROR(NonHermitianW);
KREIN_DEFINE_ERROR(AtCenter);
KREIN_DEFINE_ERROR(ResonantEnergy);
KREIN_DEFINE_ERROR(NonConvergentExtrapolation);
KREIN_DEFINE_ERROR(QuadratureFailure);

// segment model
KREIN_DEFINE_ERROR(ZeroEigenvalue);
KREIN_DEFINE_ERROR(RealEnergy);
KREIN_DEFINE_ERROR(SingularLPlusQ);
KREIN_DEFINE_ERROR(OnSegment);

#undef KREIN_DEFINE_ERROR

}  // namespace krein
