#pragma once

#include <stdexcept>
#include <string>

namespace tmotive {

/// Failure categories. The CLI maps each one to its own exit code.
enum class ErrorKind {
  domain = 2,          // bad arguments, mismatched fields, rejected inputs
  schema = 3,          // malformed JSON input
  precision = 4,       // propagated precision exhausted
  non_contraction = 5, // a fixed-point iteration stopped gaining valuation
  singular = 6,        // singular matrix / missing root
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace tmotive
