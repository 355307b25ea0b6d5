#pragma once

#include <stdexcept>
#include <string>

namespace rarenmt {

// Error taxonomy mirrors the CLI exit codes: usage = 1, data = 2, numeric = 3.

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace rarenmt
