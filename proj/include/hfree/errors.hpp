#pragma once

#include <stdexcept>
#include <string>

namespace hfree {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition on parameters or inputs does not hold.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A brute-force routine refused to run past its configured work cap.
class WorkCapExceeded : public Error {
 public:
  using Error::Error;
};

// Malformed graph file or other textual input.
class FormatError : public Error {
 public:
  using Error::Error;
};

// A node program misbehaved (e.g. addressed a non-neighbor).
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// Raised by the engine in hard-fail budget mode.
class BudgetViolationError : public Error {
 public:
  BudgetViolationError(const std::string& what, int round, unsigned long long from,
                       unsigned long long to, unsigned size_bits)
      : Error(what), round_(round), from_(from), to_(to), size_bits_(size_bits) {}

  int round() const noexcept { return round_; }
  unsigned long long from() const noexcept { return from_; }
  unsigned long long to() const noexcept { return to_; }
  unsigned size_bits() const noexcept { return size_bits_; }

 private:
  int round_;
  unsigned long long from_;
  unsigned long long to_;
  unsigned size_bits_;
};

}  // namespace hfree
