#pragma once

#include <stdexcept>
#include <string>

namespace phan {

// Exit-code classes used by the CLI: 1 = config, 2 = numeric, 3 = io.
enum class ErrorClass { Config = 1, Numeric = 2, Io = 3 };

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, std::string code, const std::string& msg)
      : std::runtime_error(msg), cls_(cls), code_(std::move(code)) {}
  ErrorClass error_class() const { return cls_; }
  const std::string& code() const { return code_; }

 private:
  ErrorClass cls_;
  std::string code_;
};

struct NonPositiveParameter : Error {
  explicit NonPositiveParameter(const std::string& name)
      : Error(ErrorClass::Config, "NonPositiveParameter",
              "parameter '" + name + "' must be positive") {}
};

struct GridTooCoarse : Error {
  explicit GridTooCoarse(const std::string& what)
      : Error(ErrorClass::Config, "GridTooCoarse", what) {}
};

struct GridMismatch : Error {
  explicit GridMismatch(const std::string& what)
      : Error(ErrorClass::Config, "GridMismatch", what) {}
};

struct BracketFailure : Error {
  explicit BracketFailure(const std::string& what)
      : Error(ErrorClass::Numeric, "BracketFailure", what) {}
};

struct ZeroDenominator : Error {
  explicit ZeroDenominator(const std::string& what)
      : Error(ErrorClass::Numeric, "ZeroDenominator", what) {}
};

struct NoConvergence : Error {
  explicit NoConvergence(const std::string& what, long iterations = -1)
      : Error(ErrorClass::Numeric, "NoConvergence", what),
        iterations(iterations) {}
  long iterations;
};

struct ResidualTooLarge : Error {
  explicit ResidualTooLarge(const std::string& what)
      : Error(ErrorClass::Numeric, "ResidualTooLarge", what) {}
};

struct OutOfRange : Error {
  explicit OutOfRange(const std::string& what)
      : Error(ErrorClass::Numeric, "OutOfRange", what) {}
};

struct SingularSystem : Error {
  explicit SingularSystem(const std::string& what)
      : Error(ErrorClass::Numeric, "SingularSystem", what) {}
};

struct TimestepTooLarge : Error {
  explicit TimestepTooLarge(const std::string& what)
      : Error(ErrorClass::Numeric, "TimestepTooLarge", what) {}
};

struct LinearSolveFailure : Error {
  explicit LinearSolveFailure(const std::string& what)
      : Error(ErrorClass::Numeric, "LinearSolveFailure", what) {}
};

struct AmbiguousLimit : Error {
  explicit AmbiguousLimit(const std::string& what)
      : Error(ErrorClass::Numeric, "AmbiguousLimit", what) {}
};

struct NotConverged : Error {
  explicit NotConverged(const std::string& what)
      : Error(ErrorClass::Numeric, "NotConverged", what) {}
};

struct InsufficientData : Error {
  explicit InsufficientData(const std::string& what)
      : Error(ErrorClass::Numeric, "InsufficientData", what) {}
};

struct NonPositiveSeries : Error {
  explicit NonPositiveSeries(const std::string& what)
      : Error(ErrorClass::Numeric, "NonPositiveSeries", what) {}
};

struct Diverged : Error {
  explicit Diverged(const std::string& what)
      : Error(ErrorClass::Numeric, "Diverged", what) {}
};

struct BadFlag : Error {
  explicit BadFlag(const std::string& what)
      : Error(ErrorClass::Config, "BadFlag", what) {}
};

struct BadValue : Error {
  BadValue(const std::string& name, const std::string& reason)
      : Error(ErrorClass::Config, "BadValue",
              "bad value for '" + name + "': " + reason) {}
};

struct UnknownKey : Error {
  explicit UnknownKey(const std::string& name)
      : Error(ErrorClass::Config, "UnknownKey",
              "unknown configuration key '" + name + "'") {}
};

struct IoError : Error {
  explicit IoError(const std::string& what)
      : Error(ErrorClass::Io, "IoError", what) {}
};

}  // namespace phan
