#pragma once

#include <stdexcept>
#include <string>

namespace uro {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

// Malformed input document. `line()` is 1-based; 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class PairNeverConnected : public Error {
 public:
  using Error::Error;
};

class NoActiveCircuit : public Error {
 public:
  using Error::Error;
};

class NoCrossing : public Error {
 public:
  using Error::Error;
};

class OutOfOrderSlice : public Error {
 public:
  using Error::Error;
};

}  // namespace uro
