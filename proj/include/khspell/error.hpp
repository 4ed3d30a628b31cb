#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace khspell {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised by every TSV/line-oriented loader. `line` is 1-based; 0 means the
// problem concerns the whole input (for instance an empty lexicon).
class ParseError : public Error {
 public:
  ParseError(std::string source, std::size_t line, const std::string& what)
      : Error(source + (line ? ":" + std::to_string(line) : std::string()) + ": " + what),
        source_(std::move(source)),
        line_(line) {}

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

}  // namespace khspell
