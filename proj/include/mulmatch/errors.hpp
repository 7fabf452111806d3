#pragma once

#include <stdexcept>
#include <string>

namespace mulmatch {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// raised by term construction when operand widths disagree
struct WidthMismatch : Error {
  explicit WidthMismatch(const std::string& msg) : Error(msg) {}
};

struct ParseError : Error {
  ParseError(const std::string& msg, int line, int col)
      : Error(msg + " at " + std::to_string(line) + ":" + std::to_string(col)),
        line(line), col(col) {}
  int line, col;
};

// input is well-formed SMT-LIB but outside the supported fragment
struct UnsupportedFeature : Error {
  UnsupportedFeature(const std::string& msg, int line, int col)
      : Error(msg + " at " + std::to_string(line) + ":" + std::to_string(col)),
        line(line), col(col) {}
  int line, col;
};

struct UnboundVariable : Error {
  explicit UnboundVariable(const std::string& name)
      : Error("unbound variable: " + name), name(name) {}
  std::string name;
};

// malformed generator specification
struct InvalidSpec : Error {
  explicit InvalidSpec(const std::string& msg) : Error(msg) {}
};

}  // namespace mulmatch
