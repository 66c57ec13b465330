#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qhd {

enum class ErrorKind {
  invalid_argument,
  grid_mismatch,
  numerical_blowup,  // NaN/Inf produced while stepping
  domain,            // request outside the recorded spacetime region
  precondition,
  config,
  io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Thrown by steppers; carries the index of the step that produced a non-finite value.
class BlowupError : public Error {
 public:
  BlowupError(std::size_t step, const std::string& what)
      : Error(ErrorKind::numerical_blowup, what + " (step " + std::to_string(step) + ")"),
        step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace qhd
