#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace foilspace {

enum class ErrorCode {
  InvalidArgument,  // bad call-site input (arity, null, out of contract)
  Domain,           // value outside a mathematical domain
  Parse,            // malformed text input
  Io,               // file system failure
  Numeric,          // singularity, degenerate data, failed decomposition
  External,         // external tool (XFOIL) failure
  Timeout,          // external tool exceeded its time budget
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void throw_error(ErrorCode code, const std::string& msg) {
  throw Error(code, msg);
}

const char* error_code_name(ErrorCode code) noexcept;

}  // namespace foilspace
