#pragma once

#include <stdexcept>
#include <string>

namespace reviewbounds {

enum class ErrorKind {
  MalformedInput,
  EmptyItem,
  InsufficientData,
  Configuration,
  Io,
  Usage,
};

// All recoverable failures in the library surface as this exception; the C
// API maps `kind()` onto its status codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace reviewbounds
