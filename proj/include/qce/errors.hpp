#pragma once

#include <stdexcept>

namespace qce {

// Invalid argument to a public entry point (bad M, L, dimensions, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// HH^H too ill-conditioned for zero forcing; callers resample the channel.
class DegenerateChannelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-finite iterate inside a solver.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qce
