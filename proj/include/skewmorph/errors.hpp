#pragma once

#include <stdexcept>

namespace skewmorph {

// Raised when a computation runs into a configured cap (closure element
// limits, oracle wall-clock budgets).  The input may be fine; the limits
// were not.
class resource_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when an internal invariant that is guaranteed by construction
// fails.  Always indicates a bug, never bad user input.
class consistency_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace skewmorph
