#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace patmine {

// Bad input from the user: unreadable repository, unknown branch,
// missing issue file, unusable regex, missing database.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Two different normalized texts produced the same digest, or a stored
// record contradicts its own keys.
class IntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed serialized input. line() is 1-based, 0 when not line oriented.
class FormatError : public std::runtime_error {
 public:
  FormatError(std::size_t line, const std::string& what)
      : std::runtime_error(line == 0 ? what
                                     : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace patmine
