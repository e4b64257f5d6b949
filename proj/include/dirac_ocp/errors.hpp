// Exception types shared across the library.
#pragma once

#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace dirac_ocp {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidPolygon : public Error {
public:
  using Error::Error;
};

class PointOutsideDomain : public Error {
public:
  using Error::Error;
};

class MonotonicityViolation : public Error {
public:
  using Error::Error;
};

class LinearSolveFailure : public Error {
public:
  using Error::Error;
};

class MeshMismatch : public Error {
public:
  using Error::Error;
};

class InsufficientData : public Error {
public:
  using Error::Error;
};

class ParseError : public Error {
public:
  using Error::Error;
};

// Carries the full list of violations, not just the first one found.
class ValidationError : public Error {
public:
  explicit ValidationError(std::vector<std::string> violations)
      : Error(join(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const { return violations_; }

private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out = "invalid problem specification:";
    for (const auto& s : v) out += "\n  - " + s;
    return out;
  }
  std::vector<std::string> violations_;
};

}  // namespace dirac_ocp
