#pragma once
#include <stdexcept>
#include <string>

namespace ctx {

// Bad input: malformed files, violated preconditions, caps exceeded.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numerical engine failed to reach its target (iteration cap, no convergence).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ctx
