#pragma once

#include <stdexcept>
#include <string>

namespace kd {

// Base of every error raised by the toolkit. `stage()` names the pipeline
// stage that failed so the CLI can report it.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what, std::string stage = {})
      : std::runtime_error(what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }
  void set_stage(std::string s) { stage_ = std::move(s); }

 private:
  std::string stage_;
};

class NotDivisible : public Error {
 public:
  using Error::Error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int line, int column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class DegreeTooHigh : public ParseError {
 public:
  using ParseError::ParseError;
};

class UnknownVariable : public ParseError {
 public:
  using ParseError::ParseError;
};

class DegenerateMap : public Error {
 public:
  using Error::Error;
};

class ResourceBudgetExceeded : public Error {
 public:
  using Error::Error;
};

class NoContinuumLimit : public Error {
 public:
  using Error::Error;
};

class LimitInconsistent : public Error {
 public:
  using Error::Error;
};

class DenominatorBlowup : public Error {
 public:
  DenominatorBlowup(const std::string& msg, double time) : Error(msg), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

}  // namespace kd
