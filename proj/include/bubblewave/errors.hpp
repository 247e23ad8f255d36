#ifndef BUBBLEWAVE_ERRORS_HPP
#define BUBBLEWAVE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bubblewave {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define BUBBLEWAVE_DEFINE_ERROR(NAME)                                         \
  class NAME : public Error {                                                  \
  public:                                                                      \
    explicit NAME(const std::string& what) : Error(#NAME ": " + what) {}       \
  }

// scene / geometry
BUBBLEWAVE_DEFINE_ERROR(DuplicateCenters);
BUBBLEWAVE_DEFINE_ERROR(NonPositiveParameter);
BUBBLEWAVE_DEFINE_ERROR(OnSurface);
BUBBLEWAVE_DEFINE_ERROR(InvalidPulse);

// incident
BUBBLEWAVE_DEFINE_ERROR(AtSource);

// dynamics
BUBBLEWAVE_DEFINE_ERROR(StepTooLarge);
BUBBLEWAVE_DEFINE_ERROR(NonPositiveStiffness);
BUBBLEWAVE_DEFINE_ERROR(SingularMatrix);
BUBBLEWAVE_DEFINE_ERROR(NotADimer);
BUBBLEWAVE_DEFINE_ERROR(NotIdentical);
BUBBLEWAVE_DEFINE_ERROR(NotEquidistant);
BUBBLEWAVE_DEFINE_ERROR(NonPositiveEigenvalue);
BUBBLEWAVE_DEFINE_ERROR(BadPairing);

// field
BUBBLEWAVE_DEFINE_ERROR(PointInsideBubble);
BUBBLEWAVE_DEFINE_ERROR(StrongCouplingRegime);

// effective medium
BUBBLEWAVE_DEFINE_ERROR(NonPositiveD);
BUBBLEWAVE_DEFINE_ERROR(AllMasked);
BUBBLEWAVE_DEFINE_ERROR(GridMismatch);

// configuration / IO
BUBBLEWAVE_DEFINE_ERROR(SceneParseError);

#undef BUBBLEWAVE_DEFINE_ERROR

} // namespace bubblewave

#endif // BUBBLEWAVE_ERRORS_HPP
