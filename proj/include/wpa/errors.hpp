#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wpa {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller supplied an argument outside the operation's contract.
class InputError : public Error {
 public:
  using Error::Error;
};

/// An argument falls outside the region a sampled object can represent.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A user function returned a non-finite value.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// An iterative numeric procedure did not reach its tolerance.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, double achieved)
      : Error(what), achieved_(achieved) {}

  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

/// sup (1+|x|)^{N+1} / Phi(x) has no interior maximum before the search guard.
class DivergingRatioError : public Error {
 public:
  using Error::Error;
};

/// Malformed experiment configuration; `line` is 0 for command-line input.
class ConfigError : public InputError {
 public:
  ConfigError(const std::string& what, std::size_t line)
      : InputError(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace wpa
