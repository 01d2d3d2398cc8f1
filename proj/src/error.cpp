#include "qwalk/error.hpp"

namespace qwalk {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_size: return "invalid-size";
    case ErrorCode::domain: return "domain";
    case ErrorCode::no_absorption: return "no-absorption";
    case ErrorCode::cap_exceeded: return "cap-exceeded";
    case ErrorCode::inconsistency: return "inconsistency";
    case ErrorCode::unsupported_structure: return "unsupported-structure";
    case ErrorCode::no_marked: return "no-marked";
    case ErrorCode::usage: return "usage";
  }
  return "unknown";
}

}  // namespace qwalk
