#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qlim {

/// Failure categories raised by the library. Every thrown qlim::Error carries
/// exactly one of these so callers (and tests) can branch on the cause.
enum class ErrorKind {
  NonHermitian,
  NonFinite,
  NoConvergence,
  DimensionMismatch,
  NotUnitVector,
  InvalidOrder,
  InvalidState,
  InvalidPOVM,
  NotUnitary,
  BadWeights,
  RepresentationUnavailable,
  ZeroVector,
  DegenerateInput,
  EmptySubset,
  CapacityExceeded,
  OutOfRange,
  DimensionObstruction,
  EmptySample,
  BadEnsemble,
  HypothesisViolated,
  SingularP,
  ConfigError,
  EmptyResults,
  IoError,
};

std::string_view toString(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(toString(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace qlim
