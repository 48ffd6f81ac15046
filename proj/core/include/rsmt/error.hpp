#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace rsmt {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad arguments or malformed input data.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A block solver could not produce a tree.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// Failure of an external solver process. `diagnostics()` carries whatever the
/// child wrote to stderr plus the exit status, for display to the user.
class ExternalSolverError : public SolverError {
 public:
  enum class Reason { launch, exit_status, timeout, malformed_reply, invalid_tree };

  ExternalSolverError(Reason reason, const std::string& what, std::string diagnostics = {})
      : SolverError(what), reason_(reason), diagnostics_(std::move(diagnostics)) {}

  Reason reason() const noexcept { return reason_; }
  const std::string& diagnostics() const noexcept { return diagnostics_; }

 private:
  Reason reason_;
  std::string diagnostics_;
};

}  // namespace rsmt
