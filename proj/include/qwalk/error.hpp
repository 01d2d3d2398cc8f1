#pragma once

#include <stdexcept>
#include <string>

namespace qwalk {

enum class ErrorCode {
  invalid_size,
  domain,
  no_absorption,
  cap_exceeded,
  inconsistency,
  unsupported_structure,
  no_marked,
  usage,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qwalk
