#pragma once

#include <stdexcept>
#include <string>

namespace bitflip {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// cell / equilibria
struct MonostableError : Error { using Error::Error; };
struct ConvergenceError : Error { using Error::Error; };

// projection
struct DegenerateAxisError : Error { using Error::Error; };

// drift extraction
struct NonMonotoneError : Error { using Error::Error; };

// sde engine
struct DomainError : Error { using Error::Error; };
struct EmptyEnsembleError : Error { using Error::Error; };

// config / harness
struct ParseError : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };

}  // namespace bitflip
