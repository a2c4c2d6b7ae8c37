#pragma once

#include <stdexcept>
#include <string>

namespace discern {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input file or unparseable text; message names the offending record.
struct ParseError : Error {
  using Error::Error;
};

// Structurally valid input that violates a contract (empty answer, bad range, ...).
struct ValidationError : Error {
  using Error::Error;
};

// Raised while evaluating a logical form (unknown relation, extremum of empty set).
struct ExecutionError : Error {
  using Error::Error;
};

// Kind mismatch inside the executor; never raised for well-typed forms.
struct TypeError : Error {
  using Error::Error;
};

}  // namespace discern
