#include "ltesim/error.hpp"

namespace ltesim {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::EmptyDomain: return "EmptyDomain";
    case ErrorKind::DisconnectedDomain: return "DisconnectedDomain";
    case ErrorKind::ProjectionAmbiguous: return "ProjectionAmbiguous";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::StepLimitExceeded: return "StepLimitExceeded";
    case ErrorKind::InsufficientSamples: return "InsufficientSamples";
    case ErrorKind::RareEvent: return "RareEvent";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
    case ErrorKind::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

}  // namespace ltesim
