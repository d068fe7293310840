#include "otto/errors.hpp"

namespace otto {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::PhysicalityViolation: return "PhysicalityViolation";
    case ErrorKind::DegenerateAdiabat: return "DegenerateAdiabat";
    case ErrorKind::SegmentOrderMismatch: return "SegmentOrderMismatch";
    case ErrorKind::MarginalCycle: return "MarginalCycle";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::ClassInapplicable: return "ClassInapplicable";
    case ErrorKind::RegimeViolation: return "RegimeViolation";
    case ErrorKind::NoMaximum: return "NoMaximum";
    case ErrorKind::StepTooLarge: return "StepTooLarge";
    case ErrorKind::DegenerateBasisAmbiguity: return "DegenerateBasisAmbiguity";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace otto
