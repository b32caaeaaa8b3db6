#pragma once

#include <stdexcept>
#include <string>

namespace qopt {

// Named error conditions. Anything recoverable is a status enum on the
// result struct instead; these are contract violations or bad input.

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct IndexOutOfRange : std::out_of_range {
  using std::out_of_range::out_of_range;
};

struct QubitCapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParamCountMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NonHermitianResidual : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CapacityExceeded : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct IndependenceViolation : std::logic_error {
  using std::logic_error::logic_error;
};

struct TooLarge : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ZeroBaseline : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct EmptySample : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct EmptyInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct UnknownFamily : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Parse failure with a file location. `where` is free-form ("line 12",
// "capacities section") because some formats are token streams without
// meaningful columns.
struct ParseError : std::runtime_error {
  ParseError(const std::string& file, const std::string& where, const std::string& what)
      : std::runtime_error(file + ": " + where + ": " + what), file(file), where(where) {}
  std::string file;
  std::string where;
};

}  // namespace qopt
