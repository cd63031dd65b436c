#pragma once

#include <stdexcept>
#include <string>

namespace lagcheck {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class NotSymmetric : public Error {
public:
  using Error::Error;
};

class NotPositiveDefinite : public Error {
public:
  using Error::Error;
};

/// Taylor order outside the range an analysis accepts.
class OrderOutOfRange : public Error {
public:
  using Error::Error;
};

/// Invalid argument that is not an order (non-positive lag, bad tolerance...).
class InvalidArgument : public Error {
public:
  using Error::Error;
};

class ConvergenceFailure : public Error {
public:
  using Error::Error;
};

class QuadratureFailure : public Error {
public:
  using Error::Error;
};

class TruncationFailure : public Error {
public:
  using Error::Error;
};

class InstabilityDetected : public Error {
public:
  using Error::Error;
};

class StepTooLarge : public Error {
public:
  using Error::Error;
};

}  // namespace lagcheck
