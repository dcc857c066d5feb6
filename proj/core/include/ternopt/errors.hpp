#pragma once

#include <stdexcept>
#include <string>

namespace ternopt {

// Base class for all recoverable library errors. Callers that only need
// best-effort handling can catch this and report err.what().
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class AsymmetricInput : public Error {
 public:
  using Error::Error;
};

class NonPositiveDenominator : public Error {
 public:
  using Error::Error;
};

class NotTernaryPsd : public Error {
 public:
  using Error::Error;
};

class DimensionTooLarge : public Error {
 public:
  using Error::Error;
};

class OverlappingSupports : public Error {
 public:
  using Error::Error;
};

class EmptyConstraints : public Error {
 public:
  using Error::Error;
};

class HasConstraints : public Error {
 public:
  using Error::Error;
};

class WrongVariant : public Error {
 public:
  using Error::Error;
};

class AlreadyFixed : public Error {
 public:
  using Error::Error;
};

class KTooLarge : public Error {
 public:
  using Error::Error;
};

class UnscalableFamily : public Error {
 public:
  using Error::Error;
};

class NoOpMove : public Error {
 public:
  using Error::Error;
};

class UnbalancedMove : public Error {
 public:
  using Error::Error;
};

class AllFixed : public Error {
 public:
  using Error::Error;
};

class NonPositiveRho : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ternopt
