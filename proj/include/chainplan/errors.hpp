#ifndef CHAINPLAN_ERRORS_HPP_
#define CHAINPLAN_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace chainplan {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// kinematics
class DimensionMismatch : public Error {
public:
  using Error::Error;
};

// world
class DegenerateDirection : public Error {
public:
  using Error::Error;
};

// ee_path
class InvalidEndpoint : public Error {
public:
  using Error::Error;
};
class NoFeasiblePath : public Error {
public:
  using Error::Error;
};
class CorridorInfeasible : public Error {
public:
  using Error::Error;
};

// body_motion
class SingularJacobian : public Error {
public:
  using Error::Error;
};
class InconsistentConstraints : public Error {
public:
  using Error::Error;
};
class IterationLimit : public Error {
public:
  using Error::Error;
};

// scenario
class ParseError : public Error {
public:
  using Error::Error;
};
class ValidationError : public Error {
public:
  using Error::Error;
};

}  // namespace chainplan

#endif  // CHAINPLAN_ERRORS_HPP_
