#pragma once

#include <stdexcept>
#include <string>

namespace amity {

/// A violated precondition on a domain value (bad modulus, non-coprime
/// moduli, empty range, ...). The CLI maps this to exit code 1.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A configured budget was exceeded (factoring work, segment memory).
/// Callers are expected to split, skip or defer the work.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A persisted file could not be decoded.
class CorruptFileError : public std::runtime_error {
 public:
  CorruptFileError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (at byte offset " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// A checkpoint belongs to a run with different parameters.
class FingerprintMismatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Something that must hold by construction did not.
class InternalConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace amity
