#include "collsched/error.hpp"

namespace collsched {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidInput: return "invalid-input";
    case ErrorKind::kInfeasible: return "infeasible";
    case ErrorKind::kTimeout: return "timeout";
    case ErrorKind::kValidation: return "validation";
    case ErrorKind::kBackend: return "backend";
    case ErrorKind::kInternal: return "internal";
  }
  return "unknown";
}

}  // namespace collsched
