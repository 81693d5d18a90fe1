#pragma once

#include <stdexcept>
#include <string>

namespace meshfield {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller supplied data that violates a documented precondition or invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A file could not be opened.
class FileNotFoundError : public Error {
 public:
  explicit FileNotFoundError(const std::string& path)
      : Error("file not found: " + path), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// A file exists but does not follow the expected layout. `where()` names the
/// offending object (HDF5 path, line number, byte offset ...).
class MalformedFileError : public Error {
 public:
  MalformedFileError(std::string where, const std::string& what)
      : Error("malformed file: " + where + ": " + what), where_(std::move(where)) {}
  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

/// Text or binary input that cannot be parsed.
class ParseError : public MalformedFileError {
 public:
  using MalformedFileError::MalformedFileError;
};

/// Linear system that cannot be solved reliably.
class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

}  // namespace meshfield
