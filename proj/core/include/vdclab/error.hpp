#pragma once

#include <stdexcept>
#include <string>

namespace vdclab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An exact integer quantity left its representable range.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// Input violates an operation's precondition.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Character-orbit iteration hit its cap without deciding finiteness.
class OrbitCapError : public Error {
 public:
  using Error::Error;
};

/// A profile is too unstable across the schedule to be analysed.
class UnstableProfileError : public Error {
 public:
  using Error::Error;
};

/// A grid resolution cannot meet the requested error bound.
class ResolutionError : public Error {
 public:
  ResolutionError(const std::string& what, long long required) : Error(what), required_(required) {}
  long long required_resolution() const { return required_; }

 private:
  long long required_;
};

}  // namespace vdclab
