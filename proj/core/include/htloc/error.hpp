#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace htloc {

// Base for every domain error raised by the library. The CLI maps these to
// exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message, const std::string& source = {})
      : Error(format(line, message, source)), line_(line), detail_(message) {}

  // 1-based; 0 when the error is not tied to a single line.
  [[nodiscard]] std::size_t line() const noexcept { return line_; }
  [[nodiscard]] const std::string& detail() const noexcept { return detail_; }

 private:
  static std::string format(std::size_t line, const std::string& message, const std::string& source) {
    std::string out = source.empty() ? std::string{} : source + ": ";
    if (line != 0) out += "line " + std::to_string(line) + ": ";
    return out + message;
  }

  std::size_t line_;
  std::string detail_;
};

}  // namespace htloc
