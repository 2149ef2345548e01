#pragma once

#include <stdexcept>
#include <string>

namespace owen {

// Base of every error thrown by the library. kind() is a stable tag used by
// the CLI and by tests.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

#define OWEN_DEFINE_ERROR(Name)                                        \
  class Name : public Error {                                          \
   public:                                                             \
    explicit Name(const std::string& what) : Error(#Name, what) {}     \
  };

OWEN_DEFINE_ERROR(InvalidVertex)
OWEN_DEFINE_ERROR(CycleDetected)
OWEN_DEFINE_ERROR(MalformedModel)
OWEN_DEFINE_ERROR(DimensionMismatch)
OWEN_DEFINE_ERROR(RoundLimitExceeded)
OWEN_DEFINE_ERROR(OracleContractViolation)
OWEN_DEFINE_ERROR(InfeasibleBase)
OWEN_DEFINE_ERROR(UnboundedBase)
OWEN_DEFINE_ERROR(NoPositiveDual)
OWEN_DEFINE_ERROR(NotOptimalDual)
OWEN_DEFINE_ERROR(NotAnImputation)
OWEN_DEFINE_ERROR(Disconnected)
OWEN_DEFINE_ERROR(BoundExceeded)
OWEN_DEFINE_ERROR(TooLarge)
OWEN_DEFINE_ERROR(ParseError)
OWEN_DEFINE_ERROR(ValidationError)
OWEN_DEFINE_ERROR(UnsupportedMethod)
OWEN_DEFINE_ERROR(AgentBoundExceeded)

#undef OWEN_DEFINE_ERROR

}  // namespace owen
