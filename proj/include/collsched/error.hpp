#ifndef COLLSCHED_ERROR_HPP_
#define COLLSCHED_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace collsched {

enum class ErrorKind {
  kInvalidInput,
  kInfeasible,
  kTimeout,
  kValidation,
  kBackend,
  kInternal,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace collsched

#endif  // COLLSCHED_ERROR_HPP_
