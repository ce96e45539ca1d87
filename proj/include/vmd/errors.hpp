#pragma once

#include <stdexcept>
#include <string>

namespace vmd {

/// Argument outside the mathematical domain of an operation (k = 0, m below threshold, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The input lacks something the operation needs (a derivative, a sup-norm, a monotone tail).
class CapabilityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A function evaluation produced a non-finite value.
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical certificate could not be established (e.g. tail segments stopped decreasing).
class CertificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file; `line` is 1-based, 0 when not tied to a line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace vmd
