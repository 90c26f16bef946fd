#pragma once

#include <stdexcept>
#include <string>

namespace eqo {

/// Base class for all library errors.  Precondition violations and malformed
/// inputs throw; numeric failures inside solvers are reported through result
/// structs instead (see NkTrace::outcome).
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionError : Error {
  using Error::Error;
};

struct ZeroFunctional : Error {
  using Error::Error;
};

struct NotElliptic : Error {
  using Error::Error;
};

struct SingularBasis : Error {
  using Error::Error;
};

struct DegenerateProportional : Error {
  using Error::Error;
};

struct DegenerateResultant : Error {
  using Error::Error;
};

struct NotARoot : Error {
  using Error::Error;
};

struct NotInCone : Error {
  using Error::Error;
};

struct ZeroLeadingCoefficient : Error {
  using Error::Error;
};

struct MixedSignColumn : Error {
  using Error::Error;
};

struct NotNormalized : Error {
  using Error::Error;
};

struct ConditionNotMet : Error {
  using Error::Error;
};

struct TheoremViolation : Error {
  using Error::Error;
};

struct PreconditionViolated : Error {
  using Error::Error;
};

struct OutOfRange : Error {
  using Error::Error;
};

struct UnknownId : Error {
  using Error::Error;
};

struct GridTooCoarse : Error {
  using Error::Error;
};

struct NonIncreasingGrid : Error {
  using Error::Error;
};

struct UsageError : Error {
  using Error::Error;
};

/// JSON / document errors carry a 1-based line and column when available.
struct ParseError : Error {
  ParseError(const std::string& what, int line_, int column_)
      : Error(what), line(line_), column(column_) {}
  int line = 0;
  int column = 0;
};

}  // namespace eqo
