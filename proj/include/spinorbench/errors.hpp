#pragma once

#include <stdexcept>
#include <string>

namespace spinorbench {

// Bad user input: unknown ids, malformed JSON, violated preconditions.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The numerics could not produce a trustworthy answer (ill-conditioned
// eigenvalue clusters, degenerate frames, step underflow).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace spinorbench
