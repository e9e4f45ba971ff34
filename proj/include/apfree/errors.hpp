#pragma once

// Exception types shared across the library. Expected outcomes (an
// infeasible amplifier search, a sequence that has not converged at the
// horizon) are modelled as values, not exceptions; only contract breaches
// land here.

#include <cstdint>
#include <stdexcept>
#include <string>

namespace apfree {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// p < 3 where a progression length is required.
class InvalidP : public Error {
 public:
  explicit InvalidP(int p) : Error("p must be >= 3, got " + std::to_string(p)) {}
};

/// A requested count was zero where at least one item is required.
class InvalidCount : public Error {
 public:
  InvalidCount() : Error("count must be >= 1") {}
};

/// x <= max(S) passed to an operation that extends S past its maximum.
class NotAnExtension : public Error {
 public:
  NotAnExtension(std::uint64_t x, std::uint64_t max)
      : Error("x = " + std::to_string(x) + " does not extend a set with max " +
              std::to_string(max)) {}
};

class PreconditionViolated : public Error {
 public:
  explicit PreconditionViolated(const std::string& what) : Error(what) {}
};

/// Input exceeds the documented machine-width limit for set elements.
class OverflowError : public Error {
 public:
  explicit OverflowError(const std::string& what) : Error(what) {}
};

class IndexOutOfRange : public Error {
 public:
  IndexOutOfRange(std::size_t index, std::size_t size)
      : Error("index " + std::to_string(index) + " out of range for size " +
              std::to_string(size)) {}
};

/// A generator-described set was queried beyond its described horizon.
class HorizonExceeded : public Error {
 public:
  HorizonExceeded(std::uint64_t asked, std::uint64_t horizon)
      : Error("prefix of length " + std::to_string(asked) +
              " requested from a set described only up to " + std::to_string(horizon)) {}
};

class AmplifierTooSmall : public Error {
 public:
  explicit AmplifierTooSmall(const std::string& what) : Error(what) {}
};

class NotApFree : public Error {
 public:
  explicit NotApFree(const std::string& what) : Error(what) {}
};

class TooLargeForExhaustive : public Error {
 public:
  explicit TooLargeForExhaustive(std::uint64_t n, std::uint64_t cap)
      : Error("exhaustive enumeration limited to N <= " + std::to_string(cap) +
              ", got N = " + std::to_string(n)) {}
};

/// Element below the 2M floor of the interval partition.
class BelowRange : public Error {
 public:
  BelowRange(std::uint64_t x, std::uint64_t floor)
      : Error("element " + std::to_string(x) + " lies below the partition floor " +
              std::to_string(floor)) {}
};

/// A verified construction produced a progression it is proven not to
/// produce. Carries the witness; must never be swallowed.
class ClaimViolated : public Error {
 public:
  ClaimViolated(std::uint64_t ap_start, std::uint64_t ap_diff, int ap_length)
      : Error("claimed-safe construction contains a " + std::to_string(ap_length) +
              "-term progression: start " + std::to_string(ap_start) + ", diff " +
              std::to_string(ap_diff)),
        start(ap_start),
        diff(ap_diff),
        length(ap_length) {}

  std::uint64_t start;
  std::uint64_t diff;
  int length;
};

/// Malformed sequence file; message names the offending line.
class ParseError : public Error {
 public:
  ParseError(const std::string& file_source, std::size_t file_line, const std::string& what)
      : Error(file_source + ":" + std::to_string(file_line) + ": " + what),
        source(file_source),
        line(file_line) {}

  std::string source;
  std::size_t line;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what) {}
};

}  // namespace apfree
