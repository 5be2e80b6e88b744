#pragma once

#include <stdexcept>
#include <string>

namespace emo20q {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text (JSON, data files). Message carries line information.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line) : Error(what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Input parsed but violates a data invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Unknown emotion word, question id, or similar key.
class LookupError : public Error {
 public:
  using Error::Error;
};

class DegeneratePosteriorError : public Error {
 public:
  using Error::Error;
};

// Event or message not accepted in the current state.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

}  // namespace emo20q
