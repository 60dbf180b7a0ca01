#pragma once

#include <stdexcept>
#include <string>

namespace qpar {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// File could not be read, written, or parsed.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& msg) : Error(msg) {}
};

// Input violates an operation's stated precondition.
class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& msg) : Error(msg) {}
};

// A pair of operators that were required to commute does not.
class NotCommutingError : public PreconditionError {
 public:
  NotCommutingError(std::size_t first, std::size_t second, double norm,
                    const std::string& msg)
      : PreconditionError(msg), first_index(first), second_index(second),
        commutator_norm(norm) {}

  std::size_t first_index;
  std::size_t second_index;
  double commutator_norm;
};

// A bit matrix that was required to be invertible is singular.
class SingularMatrixError : public PreconditionError {
 public:
  explicit SingularMatrixError(const std::string& msg) : PreconditionError(msg) {}
};

// A simulation request exceeds the configured qubit cap.
class SimSizeError : public PreconditionError {
 public:
  explicit SimSizeError(const std::string& msg) : PreconditionError(msg) {}
};

}  // namespace qpar
