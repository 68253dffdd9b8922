#pragma once

#include <stdexcept>
#include <string>

namespace rql {

/// Physical or numerical input that violates a documented precondition.
class InvalidArgument : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// A grid computation whose discretization cannot resolve the requested state
/// (norm deficit, aliasing, step-count cap).
class OracleError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace rql
