#pragma once

#include <stdexcept>
#include <string>

namespace hopfmcf {

// Bad input: out-of-range parameters, malformed files, invariant violations
// in caller-supplied data.  The CLI maps this to exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// The integrator or a geometric construction failed at run time (NaN,
// lost embeddedness, exhausted step budget).  The CLI maps this to exit code 2.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hopfmcf
