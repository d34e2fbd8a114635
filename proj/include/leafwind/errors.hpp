#pragma once

#include <stdexcept>
#include <string>

namespace leafwind {

/// Base of every error raised by the library. `code()` is a stable
/// machine-readable tag used in CLI error records.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

class ForbiddenTransition : public Error {
 public:
  explicit ForbiddenTransition(std::size_t step)
      : Error("ForbiddenTransition",
              "incompatible Khalimsky step at index " + std::to_string(step)),
        step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

class RefinementExhausted : public Error {
 public:
  explicit RefinementExhausted(double t)
      : Error("RefinementExhausted",
              "angle unwrap bisection exceeded max depth near t=" + std::to_string(t)) {}
};

class EndpointNotOnAxisClass : public Error {
 public:
  explicit EndpointNotOnAxisClass(const std::string& what)
      : Error("EndpointNotOnAxisClass", what) {}
};

class EndpointEvenClass : public Error {
 public:
  explicit EndpointEvenClass(const std::string& what) : Error("EndpointEvenClass", what) {}
};

class ZeroVector : public Error {
 public:
  explicit ZeroVector(double t = -1.0)
      : Error("ZeroVector", t < 0 ? std::string("zero vector has no angle")
                                  : "zero vector along path at t=" + std::to_string(t)) {}
};

class DiagonalPoint : public Error {
 public:
  DiagonalPoint() : Error("DiagonalPoint", "z and z' coincide") {}
};

class AmbiguousSide : public Error {
 public:
  explicit AmbiguousSide(double distance)
      : Error("AmbiguousSide",
              "point lies in the leaf gray zone (distance " + std::to_string(distance) + ")") {}
};

class StepTooLarge : public Error {
 public:
  explicit StepTooLarge(const std::string& what) : Error("StepTooLarge", what) {}
};

class BoxNeverExited : public Error {
 public:
  explicit BoxNeverExited(std::size_t steps)
      : Error("BoxNeverExited", "leaf trace hit the step cap (" + std::to_string(steps) + ")") {}
};

class ZeroTangent : public Error {
 public:
  ZeroTangent() : Error("ZeroTangent", "path has a degenerate segment") {}
};

class NotTransverse : public Error {
 public:
  explicit NotTransverse(const std::string& what) : Error("NotTransverse", what) {}
};

class FixedPointSuspected : public Error {
 public:
  explicit FixedPointSuspected(const std::string& what) : Error("FixedPointSuspected", what) {}
};

class NonEscaping : public Error {
 public:
  explicit NonEscaping(const std::string& what) : Error("NonEscaping", what) {}
};

class OrbitTouched : public Error {
 public:
  explicit OrbitTouched(const std::string& what) : Error("OrbitTouched", what) {}
};

class IndexOutOfScheme : public Error {
 public:
  explicit IndexOutOfScheme(std::size_t i)
      : Error("IndexOutOfScheme", "base point index " + std::to_string(i) + " out of scheme") {}
};

class WitnessInvalid : public Error {
 public:
  explicit WitnessInvalid(const std::string& what) : Error("WitnessInvalid", what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error("ConfigError", what) {}
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error("InvalidArgument", what) {}
};

}  // namespace leafwind
