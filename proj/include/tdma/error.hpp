#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tdma {

// Malformed caller input: unknown node, bad path, out-of-range parameter.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Text that does not follow its grammar. Carries the 1-based line number.
class ParseError : public InputError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : InputError(what + " at line " + std::to_string(line)), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace tdma
