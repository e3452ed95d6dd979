#pragma once

#include <stdexcept>
#include <string>

namespace ikg {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Negative mass, wrong normalization, or malformed matrix shape.
class InvalidDistribution : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Chart parameters where the normalizer vanishes.
class SingularParameter : public Error {
 public:
  using Error::Error;
};

class NotInLowerSet : public Error {
 public:
  using Error::Error;
};

class NotAbsolutelyContinuous : public Error {
 public:
  using Error::Error;
};

/// A marginal entry is zero where a strictly positive one is required.
class DegenerateDistribution : public Error {
 public:
  using Error::Error;
};

/// A computed quantity contradicts a structural identity (e.g. phi(1) > 0).
class InconsistencyError : public Error {
 public:
  using Error::Error;
};

/// Two algebraically equal closed forms disagree numerically.
class TranscriptionError : public Error {
 public:
  using Error::Error;
};

}  // namespace ikg
