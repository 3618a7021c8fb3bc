#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mfg {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonZeroMeanDrift : public Error {
 public:
  explicit NonZeroMeanDrift(double mean)
      : Error("drift has nonzero mean " + std::to_string(mean)), mean_(mean) {}
  double mean() const { return mean_; }

 private:
  double mean_;
};

class ArityMismatch : public Error {
 public:
  using Error::Error;
};

class NotOnBoundary : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class UnsupportedOperatorPair : public Error {
 public:
  using Error::Error;
};

class UnsupportedOperator : public Error {
 public:
  using Error::Error;
};

class BadGrid : public Error {
 public:
  using Error::Error;
};

class BadCount : public Error {
 public:
  using Error::Error;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

class EmptyGrid : public Error {
 public:
  using Error::Error;
};

class GridMismatch : public Error {
 public:
  using Error::Error;
};

class SingularNormalEquations : public Error {
 public:
  using Error::Error;
};

class NotPositiveDefinite : public Error {
 public:
  explicit NotPositiveDefinite(std::ptrdiff_t pivot)
      : Error("matrix is not positive definite at pivot " + std::to_string(pivot)),
        pivot_(pivot) {}
  std::ptrdiff_t pivot() const { return pivot_; }

 private:
  std::ptrdiff_t pivot_;
};

class NonFiniteObjective : public Error {
 public:
  explicit NonFiniteObjective(int iteration)
      : Error("objective is not finite at iteration " + std::to_string(iteration)),
        iteration_(iteration) {}
  int iteration() const { return iteration_; }

 private:
  int iteration_;
};

class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace mfg
