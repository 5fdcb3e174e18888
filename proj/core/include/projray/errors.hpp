#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace projray {

// Raised when a caller violates a documented precondition (bad norm, wrong
// dimension, orthogonal midpoint, ...).  The machine-readable `code` is stable
// across releases; `context` carries the offending numeric values so error
// reports can show the residual that tripped the check.
class PreconditionError : public std::domain_error {
 public:
  using Context = std::vector<std::pair<std::string, double>>;

  PreconditionError(std::string code, const std::string& message,
                    Context context = {})
      : std::domain_error(message),
        code_(std::move(code)),
        context_(std::move(context)) {}

  const std::string& code() const noexcept { return code_; }
  const Context& context() const noexcept { return context_; }

 private:
  std::string code_;
  Context context_;
};

}  // namespace projray
