#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace lumpkit {

// Raised when an input exceeds a configured size cap (state space, automorphism
// search, nonzero budget).
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dynkin's criterion failed beyond tolerance where exact lumpability was required.
class LumpabilityError : public std::runtime_error {
 public:
  LumpabilityError(const std::string& what, double deviation)
      : std::runtime_error(what), deviation_(deviation) {}
  double deviation() const { return deviation_; }

 private:
  double deviation_;
};

// The positive-entry digraph of a transition matrix is not strongly connected.
class ReducibleChainError : public std::runtime_error {
 public:
  ReducibleChainError(const std::string& what,
                      std::vector<std::vector<std::size_t>> closed_classes)
      : std::runtime_error(what), closed_classes_(std::move(closed_classes)) {}
  const std::vector<std::vector<std::size_t>>& closed_classes() const {
    return closed_classes_;
  }

 private:
  std::vector<std::vector<std::size_t>> closed_classes_;
};

// pi_u t_{u,v} > 0 while the reference kernel puts no mass on (u, v).
class AbsoluteContinuityError : public std::runtime_error {
 public:
  AbsoluteContinuityError(const std::string& what, std::size_t u, std::size_t v)
      : std::runtime_error(what), u_(u), v_(v) {}
  std::size_t row() const { return u_; }
  std::size_t col() const { return v_; }

 private:
  std::size_t u_, v_;
};

// Malformed text input; carries the 1-based line number when known.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace lumpkit
