#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace thermoset {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The forbidden-word set leaves no infinite admissible sequence.
class EmptySubshift : public Error {
 public:
  using Error::Error;
};

/// Malformed expression source; `offset()` is the byte offset of the fault.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class NotMonotone : public Error {
 public:
  using Error::Error;
};

class OutOfRange : public Error {
 public:
  using Error::Error;
};

/// Carries every violated invariant found while validating a system.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> problems)
      : Error(join(problems)), problems_(std::move(problems)) {}
  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  static std::string join(const std::vector<std::string>& items) {
    std::string out = "invalid system:";
    for (const auto& p : items) out += "\n  - " + p;
    return out;
  }
  std::vector<std::string> problems_;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

class NoSignChange : public Error {
 public:
  using Error::Error;
};

class NoTransitivity : public Error {
 public:
  using Error::Error;
};

class ContractionDetected : public Error {
 public:
  using Error::Error;
};

class InversionStall : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside its documented precondition.
class PreconditionViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace thermoset
