#pragma once

#include <stdexcept>
#include <string>

namespace eedecide {

// Input outside the domain of a welfare transform (nonpositive income, z outside range of f).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Malformed arguments: dimension mismatches, probabilities outside [0,1], empty sets.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Root solve failed to bracket or converge.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace eedecide
