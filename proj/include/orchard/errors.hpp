#pragma once

#include <stdexcept>
#include <string>

namespace orchard {

/// Base of every error raised by the library. Input errors (bad files, bad
/// arguments) derive from InputError so the CLI can map them to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

#define ORCHARD_DEFINE_ERROR(Name, Base)          \
  class Name : public Base {                      \
   public:                                        \
    explicit Name(const std::string& what)        \
        : Base(std::string(#Name ": ") + what) {} \
  }

// geometry
ORCHARD_DEFINE_ERROR(DegenerateProjection, Error);
ORCHARD_DEFINE_ERROR(SingularCamera, Error);
ORCHARD_DEFINE_ERROR(InsufficientViews, Error);
ORCHARD_DEFINE_ERROR(InvalidBox, InputError);

// assignment
ORCHARD_DEFINE_ERROR(NonFiniteCost, InputError);

// sphere estimation / tracking
ORCHARD_DEFINE_ERROR(MissingCamera, InputError);

// metrics
ORCHARD_DEFINE_ERROR(InvalidAlpha, InputError);
ORCHARD_DEFINE_ERROR(EmptyGroundTruth, InputError);
ORCHARD_DEFINE_ERROR(ZeroGroundTruth, InputError);
ORCHARD_DEFINE_ERROR(DuplicateId, InputError);

// simulator
ORCHARD_DEFINE_ERROR(InfeasiblePlacement, Error);
ORCHARD_DEFINE_ERROR(InvalidConfig, InputError);

// regressor
ORCHARD_DEFINE_ERROR(ZeroVariance, InputError);
ORCHARD_DEFINE_ERROR(NonFiniteLoss, Error);

// io
ORCHARD_DEFINE_ERROR(ParseError, InputError);
ORCHARD_DEFINE_ERROR(NegativeDimensions, InputError);
ORCHARD_DEFINE_ERROR(UnknownCameraModel, InputError);
ORCHARD_DEFINE_ERROR(UnnormalizedRotation, InputError);
ORCHARD_DEFINE_ERROR(MissingIntrinsics, InputError);
ORCHARD_DEFINE_ERROR(OffsetOutOfFrame, InputError);

#undef ORCHARD_DEFINE_ERROR

}  // namespace orchard
