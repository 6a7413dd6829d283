#include "rodsed/error.hpp"

namespace rodsed {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_order: return "invalid order";
    case ErrorKind::dimension: return "dimension mismatch";
    case ErrorKind::contract: return "contract violation";
    case ErrorKind::cfl: return "CFL violation";
    case ErrorKind::no_steady_state: return "no steady state";
    case ErrorKind::decomposition: return "decomposition failure";
    case ErrorKind::solver: return "solver failure";
    case ErrorKind::config: return "invalid configuration";
    case ErrorKind::io: return "I/O failure";
  }
  return "error";
}

}  // namespace rodsed
