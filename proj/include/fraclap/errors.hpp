#pragma once

#include <stdexcept>
#include <string>

namespace fraclap {

/// Base class for every domain error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define FRACLAP_DEFINE_ERROR(Name)              \
  class Name : public Error {                   \
   public:                                      \
    explicit Name(const std::string& what)      \
        : Error(#Name ": " + what) {}           \
  }

FRACLAP_DEFINE_ERROR(InvalidParameters);
FRACLAP_DEFINE_ERROR(InadmissibleExponents);
FRACLAP_DEFINE_ERROR(PreconditionViolation);
FRACLAP_DEFINE_ERROR(QuadratureNonConvergent);
FRACLAP_DEFINE_ERROR(HypothesisNotMet);
FRACLAP_DEFINE_ERROR(HypothesisViolated);
FRACLAP_DEFINE_ERROR(BetaRequired);
FRACLAP_DEFINE_ERROR(ThetaOutOfRange);
FRACLAP_DEFINE_ERROR(EquivalenceViolated);
FRACLAP_DEFINE_ERROR(StepTooLarge);
FRACLAP_DEFINE_ERROR(DegenerateInput);
FRACLAP_DEFINE_ERROR(ConfigError);

#undef FRACLAP_DEFINE_ERROR

}  // namespace fraclap
