#pragma once

#include <stdexcept>
#include <string>

namespace rodsed {

enum class ErrorKind {
  invalid_order,
  dimension,
  contract,
  cfl,
  no_steady_state,
  decomposition,
  solver,
  config,
  io,
};

const char* to_string(ErrorKind kind);

// Single exception type for the library. The kind lets callers (the CLI, tests)
// branch on the failure class without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace rodsed
