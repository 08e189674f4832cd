#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace alcs {

// Broad failure classes. The CLI maps these to exit codes.
enum class ErrorKind { Config, Model, Numerical };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::Config, what) {}
};

// A required input file (e.g. run artefacts) is missing.
class NotFound : public ConfigError {
 public:
  explicit NotFound(const std::string& what) : ConfigError(what) {}
};

class ModelError : public Error {
 public:
  explicit ModelError(const std::string& what) : Error(ErrorKind::Model, what) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what)
      : Error(ErrorKind::Numerical, what) {}
};

// index is the input coordinate (or pass) being seeded, -1 if unknown.
class NonFiniteDerivative : public NumericalError {
 public:
  explicit NonFiniteDerivative(long index = -1)
      : NumericalError("non-finite derivative" +
                       (index >= 0 ? " at input " + std::to_string(index) : std::string())),
        index_(index) {}
  long index() const noexcept { return index_; }

 private:
  long index_;
};

class InvalidDirection : public NumericalError {
 public:
  explicit InvalidDirection(const std::string& what) : NumericalError(what) {}
};

class NonFiniteObjective : public NumericalError {
 public:
  NonFiniteObjective() : NumericalError("non-finite objective at initial point") {}
};

class SingularWhitening : public NumericalError {
 public:
  explicit SingularWhitening(const std::string& what) : NumericalError(what) {}
};

class IndefiniteHessian : public NumericalError {
 public:
  IndefiniteHessian(double pivot, std::size_t index)
      : NumericalError("indefinite Hessian: pivot " + std::to_string(pivot) + " at row " +
                       std::to_string(index)),
        pivot_(pivot),
        index_(index) {}
  double pivot() const noexcept { return pivot_; }
  std::size_t index() const noexcept { return index_; }

 private:
  double pivot_;
  std::size_t index_;
};

class StructureViolation : public NumericalError {
 public:
  StructureViolation(std::size_t row, std::size_t col, double value)
      : NumericalError("Hessian entry (" + std::to_string(row) + "," + std::to_string(col) +
                       ") = " + std::to_string(value) + " outside declared structure"),
        row_(row),
        col_(col) {}
  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }

 private:
  std::size_t row_, col_;
};

class NonConcaveDirection : public NumericalError {
 public:
  explicit NonConcaveDirection(std::size_t j)
      : NumericalError("direction " + std::to_string(j) + " has non-negative curvature"),
        direction_(j) {}
  std::size_t direction() const noexcept { return direction_; }

 private:
  std::size_t direction_;
};

class DegeneratePrior : public ModelError {
 public:
  explicit DegeneratePrior(const std::string& what) : ModelError(what) {}
};

class SliceCollapse : public NumericalError {
 public:
  SliceCollapse() : NumericalError("slice bracket collapsed") {}
};

class StuckSampler : public NumericalError {
 public:
  explicit StuckSampler(const std::string& what) : NumericalError(what) {}
};

class DegenerateWeights : public NumericalError {
 public:
  DegenerateWeights() : NumericalError("all importance weights are zero or non-finite") {}
};

class QuadratureError : public NumericalError {
 public:
  explicit QuadratureError(const std::string& what) : NumericalError(what) {}
};

}  // namespace alcs
