#pragma once

#include <stdexcept>
#include <string>

namespace noisectl {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates a model, control or configuration invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A point lies outside the computation domain, or the noise intensity
/// vanishes there.
class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Fixed-point iteration failed to converge, or a numerical quantity
/// (density, integral, trajectory) became unusable.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// The response moment left the admissible half-line R < 1/s_cor.
class StationarityError : public ConvergenceError {
 public:
  StationarityError(const std::string& what, double offending_R)
      : ConvergenceError(what), R_(offending_R) {}
  double offending_R() const noexcept { return R_; }

 private:
  double R_;
};

/// The grid is too coarse to resolve the curvature of a density.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace noisectl
