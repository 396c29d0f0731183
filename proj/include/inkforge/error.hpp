#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace inkforge {

enum class ErrorKind {
  Usage,    // bad arguments or configuration
  Data,     // malformed input or violated precondition
  Backend,  // external derendering backend failed
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ErrorKind::Data, what) {}
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error(ErrorKind::Usage, what) {}
};

class BackendError : public Error {
 public:
  explicit BackendError(const std::string& what) : Error(ErrorKind::Backend, what) {}
};

/// Syntax error in a text input, with 1-based position.
class ParseError : public DataError {
 public:
  ParseError(const std::string& msg, std::size_t line, std::size_t column)
      : DataError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                  msg),
        line_(line),
        column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Structurally valid input that does not match the expected schema.
class SchemaError : public DataError {
 public:
  using DataError::DataError;
};

/// A sample or field whose value cannot be interpreted.
class ValueError : public DataError {
 public:
  using DataError::DataError;
};

}  // namespace inkforge
