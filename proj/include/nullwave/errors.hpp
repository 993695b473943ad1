// Error taxonomy shared by every stage of the solver pipeline.
#pragma once

#include <stdexcept>
#include <string>

namespace nullwave {

enum class ErrorKind {
  HyperbolicityLoss,
  DomainError,
  QuadratureFailure,
  InnerFixedPointDivergence,
  GridMismatch,
  SliceNotSpacelike,
  NoRealRoot,
  RootAmbiguity,
  FrameDegenerate,
  FixedPointDivergence,
  CFLViolation,
  OutOfImage,
  InversionFailure,
  InsufficientDomain,
  InvalidScenario,
  IoError,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Builds the message "<Kind>: <detail>" and throws.
[[noreturn]] void raise(ErrorKind kind, const std::string& detail);

}  // namespace nullwave
