#pragma once

#include <stdexcept>
#include <string>

namespace tai {

/// Line/column of a token in scenario-syntax text (1-based; 0 means unknown).
struct Position {
  int line = 0;
  int column = 0;

  std::string str() const {
    return std::to_string(line) + ":" + std::to_string(column);
  }
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PositionedError : public Error {
 public:
  PositionedError(const std::string& what, Position pos)
      : Error(pos.line > 0 ? pos.str() + ": " + what : what), pos_(pos) {}
  Position position() const { return pos_; }

 private:
  Position pos_;
};

class SyntaxError : public PositionedError {
 public:
  using PositionedError::PositionedError;
};

class SortError : public PositionedError {
 public:
  SortError(const std::string& expected, const std::string& found,
            Position pos = {})
      : PositionedError("sort error: expected " + expected + ", found " + found,
                        pos),
        expected_(expected),
        found_(found) {}
  const std::string& expected() const { return expected_; }
  const std::string& found() const { return found_; }

 private:
  std::string expected_;
  std::string found_;
};

class UnknownSymbol : public PositionedError {
 public:
  UnknownSymbol(const std::string& name, Position pos = {})
      : PositionedError("unknown symbol '" + name + "'", pos), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

/// Declaring a symbol that collides with a built-in or an existing symbol.
class DeclarationError : public Error {
 public:
  using Error::Error;
};

/// A malformed proof or certificate document.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace tai
