#pragma once

#include <stdexcept>
#include <string>

namespace rubricbench {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input: malformed files, violated invariants, impossible requests.
// The CLI maps these to exit status 1.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Network, HTTP, or filesystem failure. The CLI maps these to exit status 2.
class TransportError : public Error {
 public:
  using Error::Error;
};

}  // namespace rubricbench
