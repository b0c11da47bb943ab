#pragma once

#include <stdexcept>
#include <string>

namespace nesa {

// Machine-readable error categories surfaced by the CLI as error[<tag>].
enum class ErrorKind {
  parse,
  validation,
  config,
  io,
  vocabulary,
  alignment,
  lexicon,
  contract,
  numeric,
  usage,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::parse: return "parse";
    case ErrorKind::validation: return "validation";
    case ErrorKind::config: return "config";
    case ErrorKind::io: return "io";
    case ErrorKind::vocabulary: return "vocabulary";
    case ErrorKind::alignment: return "alignment";
    case ErrorKind::lexicon: return "lexicon";
    case ErrorKind::contract: return "contract";
    case ErrorKind::numeric: return "numeric";
    case ErrorKind::usage: return "usage";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) fail(kind, message);
}

}  // namespace nesa
