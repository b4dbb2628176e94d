#pragma once

#include <stdexcept>
#include <string>

namespace qrange {

// Precondition violations (bad dimensions, invalid operators, out-of-range
// parameters) are reported as std::invalid_argument. The two types below
// carry outcomes that callers, the CLI in particular, must tell apart.

/// A configured size or resource cap would be exceeded.
class SizeCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The input is a mathematical negative: no realization exists.
class Infeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical decision procedure ended inside its ambiguity band.
class Undecided : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qrange
