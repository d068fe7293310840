#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace otto {

enum class ErrorKind {
  InvalidParameter,
  PhysicalityViolation,
  DegenerateAdiabat,
  SegmentOrderMismatch,
  MarginalCycle,
  NoConvergence,
  ClassInapplicable,
  RegimeViolation,
  NoMaximum,
  StepTooLarge,
  DegenerateBasisAmbiguity,
  ConfigError,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries a kind so that sweeps can
// record it as data instead of aborting.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define OTTO_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                     \
   public:                                                        \
    explicit Name(const std::string& what)                        \
        : Error(ErrorKind::Name, what) {}                         \
  };

OTTO_DEFINE_ERROR(InvalidParameter)
OTTO_DEFINE_ERROR(PhysicalityViolation)
OTTO_DEFINE_ERROR(DegenerateAdiabat)
OTTO_DEFINE_ERROR(SegmentOrderMismatch)
OTTO_DEFINE_ERROR(MarginalCycle)
OTTO_DEFINE_ERROR(NoConvergence)
OTTO_DEFINE_ERROR(ClassInapplicable)
OTTO_DEFINE_ERROR(RegimeViolation)
OTTO_DEFINE_ERROR(NoMaximum)
OTTO_DEFINE_ERROR(StepTooLarge)
OTTO_DEFINE_ERROR(DegenerateBasisAmbiguity)
OTTO_DEFINE_ERROR(ConfigError)

#undef OTTO_DEFINE_ERROR

}  // namespace otto
