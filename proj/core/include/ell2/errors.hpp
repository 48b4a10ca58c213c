#pragma once

#include <stdexcept>
#include <string>

namespace ell2 {

enum class ErrorKind {
  TailNotCertified,
  ZeroCoordinate,
  NonFiniteSample,
  MalformedBlock,
  TailDivergent,
  LocalFinitenessViolated,
  ChartMismatch,
  UnsupportedCodimension,
  NotClosed,
  BasisTooSmall,
  NotNearInfinity,
  RatioTestInconclusive,
  ConditionViolated,
  ConfigError,
  IoError,
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ell2
