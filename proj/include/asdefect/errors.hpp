#pragma once

#include <stdexcept>
#include <string>

namespace asdefect {

// Coarse classes map one-to-one onto CLI exit codes.
enum class ErrorClass {
  input,       // malformed or illegal user-supplied data
  infeasible,  // hypotheses of a transition or construction cannot be met
  invariant,   // an internal consistency check failed
};

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), cls_(cls), kind_(std::move(kind)) {}

  ErrorClass error_class() const { return cls_; }
  const std::string& kind() const { return kind_; }

 private:
  ErrorClass cls_;
  std::string kind_;
};

inline Error domain_error(const std::string& what) {
  return Error(ErrorClass::input, "domain error", what);
}
inline Error containment_error(const std::string& what) {
  return Error(ErrorClass::invariant, "containment error", what);
}
inline Error monotonicity_error(const std::string& what) {
  return Error(ErrorClass::invariant, "monotonicity violation", what);
}
inline Error wrong_type_error(const std::string& what) {
  return Error(ErrorClass::infeasible, "wrong type", what);
}
inline Error hypothesis_error(const std::string& what) {
  return Error(ErrorClass::infeasible, "hypothesis violation", what);
}
inline Error consistency_error(const std::string& what) {
  return Error(ErrorClass::invariant, "internal consistency error", what);
}
inline Error infeasible_error(const std::string& what) {
  return Error(ErrorClass::infeasible, "infeasible", what);
}
inline Error invalid_input(const std::string& what) {
  return Error(ErrorClass::input, "invalid input", what);
}

// Raised when an answer would depend on coefficients beyond a series' guarantee.
class TruncationError : public Error {
 public:
  explicit TruncationError(const std::string& what)
      : Error(ErrorClass::infeasible, "truncation insufficient", what) {}
};

}  // namespace asdefect
