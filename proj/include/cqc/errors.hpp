#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cqc {

// Base of every library error. The CLI maps subclasses onto exit codes.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what), msg_(what) {}

  const char* what() const noexcept override { return msg_.c_str(); }
  // Prefixes the message, e.g. with the hbar at which the failure happened.
  void add_context(const std::string& ctx) { msg_ = ctx + ": " + msg_; }

 private:
  std::string msg_;
};

class MalformedObservable : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(std::size_t lhs, std::size_t rhs)
      : Error("dimension mismatch: " + std::to_string(lhs) + " vs " +
              std::to_string(rhs)) {}
};

// Quadrature or series did not reach the requested tolerance.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double achieved)
      : Error(what + " (achieved " + std::to_string(achieved) + ")"),
        achieved_(achieved) {}
  double achieved() const { return achieved_; }

 private:
  double achieved_;
};

// The Fock cutoff needed to represent a state exceeds the configured cap.
class TruncationError : public Error {
 public:
  TruncationError(std::size_t required, std::size_t cap)
      : Error("Fock dimension " + std::to_string(required) +
              " required, cap is " + std::to_string(cap)),
        required_(required) {}
  std::size_t required_dim() const { return required_; }

 private:
  std::size_t required_;
};

class NotAState : public Error {
 public:
  using Error::Error;
};

class NotHermitian : public Error {
 public:
  using Error::Error;
};

// Relative entropy / KL divergence is infinite (support condition violated).
class DivergenceError : public Error {
 public:
  using Error::Error;
};

// A quantity that must be real or imaginary by symmetry was not.
class NumericsError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t offset, const std::string& expected)
      : Error("parse error at byte " + std::to_string(offset) + ": expected " +
              expected),
        offset_(offset),
        expected_(expected) {}
  std::size_t offset() const { return offset_; }
  const std::string& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::string expected_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace cqc
