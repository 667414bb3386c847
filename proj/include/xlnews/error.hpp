#pragma once

#include <stdexcept>
#include <string>

namespace xlnews {

// Base class for every error the engine raises. Callers that only care
// about success/failure catch this; the CLI maps it to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad user input: malformed config, missing file, invalid parameter.
// The CLI maps it to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace xlnews
