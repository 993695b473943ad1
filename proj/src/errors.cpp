#include "nullwave/errors.hpp"

namespace nullwave {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::HyperbolicityLoss: return "HyperbolicityLoss";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::InnerFixedPointDivergence: return "InnerFixedPointDivergence";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::SliceNotSpacelike: return "SliceNotSpacelike";
    case ErrorKind::NoRealRoot: return "NoRealRoot";
    case ErrorKind::RootAmbiguity: return "RootAmbiguity";
    case ErrorKind::FrameDegenerate: return "FrameDegenerate";
    case ErrorKind::FixedPointDivergence: return "FixedPointDivergence";
    case ErrorKind::CFLViolation: return "CFLViolation";
    case ErrorKind::OutOfImage: return "OutOfImage";
    case ErrorKind::InversionFailure: return "InversionFailure";
    case ErrorKind::InsufficientDomain: return "InsufficientDomain";
    case ErrorKind::InvalidScenario: return "InvalidScenario";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(what), kind_(kind) {}

void raise(ErrorKind kind, const std::string& detail) {
  throw Error(kind, std::string(to_string(kind)) + ": " + detail);
}

}  // namespace nullwave
