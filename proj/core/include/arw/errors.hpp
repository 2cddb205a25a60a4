#pragma once

#include <stdexcept>
#include <string>

namespace arw {

// Domain error with a stable machine-readable code, mapped by the CLI to
// {"error": code, "message": ...} and exit status 1.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

[[noreturn]] inline void fail(const char* code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace arw
