#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace dme {

// Lattice parameter eps collapsed to zero; the caller must route the
// degenerate (zero-weight) path around the quantizer.
class DegenerateLattice : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A stated inequality precondition does not hold. The message names the
// inequality that failed.
class ConditionViolated : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bit budget r is below the floor required by the resolution formula.
class BudgetTooSmall : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Supplied vectors violate a declared distance constraint.
class ConstraintViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A chain references an estimate that has not been decoded yet.
class OrderViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid experiment configuration; carries the offending field name.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error("config field '" + field + "': " + message),
        field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace dme
