#pragma once

#include <stdexcept>
#include <string>

namespace kisinhn {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InsufficientPrecision : Error {
  using Error::Error;
};
struct NonSquare : Error {
  using Error::Error;
};
struct ParseError : Error {
  using Error::Error;
};
struct DimensionMismatch : Error {
  using Error::Error;
};
struct TameDegreeNotCoprime : Error {
  using Error::Error;
};
struct NotEffective : Error {
  using Error::Error;
};
struct SeedPrecisionTooSmall : Error {
  using Error::Error;
};
struct FiltrationWitnessNotNested : Error {
  using Error::Error;
};
struct AmbiguousWitness : Error {
  using Error::Error;
};
struct NotUnstable : Error {
  using Error::Error;
};
struct AmbiguousMaximizer : Error {
  using Error::Error;
};
struct ScaleTooLarge : Error {
  using Error::Error;
};
struct NotDominating : Error {
  using Error::Error;
};
struct LengthMismatch : Error {
  using Error::Error;
};
struct BudgetExceeded : Error {
  using Error::Error;
};
// Raised when a checked mathematical property fails at runtime.
struct PropertyFailure : Error {
  using Error::Error;
};

}  // namespace kisinhn
