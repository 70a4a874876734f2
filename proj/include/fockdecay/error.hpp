// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace fockdecay {

enum class ErrorKind {
  InvalidArgument,   // precondition violated by the caller
  OutOfRange,        // mode index or occupation outside the space
  Truncation,        // state or series does not fit the truncated space
  Certificate,       // commutation certificate of a decay model failed
  Invariant,         // runtime invariant breach during evolution
  Config,            // scenario configuration rejected
  Io,
};

/// Library exception. `code()` is a stable machine-readable identifier such as
/// "CONFIG_WIDTH_NEGATIVE" or "TRUNCATION_TAIL".
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& message)
      : std::runtime_error(message), kind_(kind), code_(std::move(code)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& code() const noexcept { return code_; }

 private:
  ErrorKind kind_;
  std::string code_;
};

}  // namespace fockdecay
