#pragma once

#include <stdexcept>
#include <string>

namespace gwt {

/// Coarse failure class, used by the CLI for exit codes:
/// validation -> 2, numeric -> 3, hypothesis -> 4.
enum class ErrorKind { validation, numeric, hypothesis };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string module, std::string op, const std::string& message)
      : std::runtime_error(module + "." + op + ": " + message),
        kind_(kind),
        module_(std::move(module)),
        op_(std::move(op)) {}

  ErrorKind kind() const { return kind_; }
  const std::string& module_name() const { return module_; }
  const std::string& op_name() const { return op_; }

 private:
  ErrorKind kind_;
  std::string module_;
  std::string op_;
};

#define GWT_DEFINE_ERROR(Name, Kind)                                        \
  class Name : public Error {                                               \
   public:                                                                  \
    Name(std::string module, std::string op, const std::string& message)    \
        : Error(ErrorKind::Kind, std::move(module), std::move(op), message) {} \
  }

GWT_DEFINE_ERROR(ValidationError, validation);
GWT_DEFINE_ERROR(PoleOfG, numeric);
GWT_DEFINE_ERROR(NegativeCoefficient, validation);
GWT_DEFINE_ERROR(MultipleZero, numeric);
GWT_DEFINE_ERROR(RootFindFailure, numeric);
GWT_DEFINE_ERROR(Divergence, numeric);
GWT_DEFINE_ERROR(BranchAmbiguity, numeric);
GWT_DEFINE_ERROR(OverflowGuard, numeric);
GWT_DEFINE_ERROR(StripViolation, numeric);
GWT_DEFINE_ERROR(NonConvergence, numeric);
GWT_DEFINE_ERROR(DegenerateDerivative, numeric);
GWT_DEFINE_ERROR(HypothesisViolation, hypothesis);
GWT_DEFINE_ERROR(NotApplicable, hypothesis);

#undef GWT_DEFINE_ERROR

}  // namespace gwt
