#pragma once

#include <stdexcept>
#include <string>

namespace gls {

/// Base of every error raised by the library.
///
/// Errors fall into two groups: precondition violations (the caller passed
/// something outside a documented range) and computational failures (the
/// inputs were valid but the quantity does not exist or cannot be certified).
/// The command-line front end maps them to exit statuses 2 and 1.
class Error : public std::runtime_error {
 public:
  enum class Kind { Precondition, Computation };

  Error(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what) : Error(Kind::Precondition, what) {}
};

class ComputationError : public Error {
 public:
  explicit ComputationError(const std::string& what) : Error(Kind::Computation, what) {}
};

/// A family parameter lies outside its admissible range.
class ParameterError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// An argument lies outside the domain of the function it is passed to.
class DomainError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// Two generating functions with different support bounds were combined.
class IncompatibleSupport : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// Moment profiles tabulated on different p-grids were combined.
class IncompatibleGrid : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// Non-positive or non-finite values where a generating function is required.
class InvalidFunction : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// No closed-form K constant is known for the requested family.
class NoClosedForm : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// The tail estimate was requested below the level where it is valid.
class OutOfValidity : public PreconditionError {
 public:
  OutOfValidity(const std::string& what, double threshold)
      : PreconditionError(what), threshold_(threshold) {}
  double threshold() const noexcept { return threshold_; }

 private:
  double threshold_;
};

/// A moment integral diverges (or cannot be shown to converge) at order p.
class UnboundedMoment : public ComputationError {
 public:
  UnboundedMoment(const std::string& what, double p) : ComputationError(what), p_(p) {}
  double p() const noexcept { return p_; }

 private:
  double p_;
};

/// Every candidate of an infimum was infinite or undefined.
class NoFiniteValue : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

/// |f|_p vanishes while |g|_p does not, so the operator ratio is undefined.
class IndeterminateRatio : public ComputationError {
 public:
  IndeterminateRatio(const std::string& what, double p) : ComputationError(what), p_(p) {}
  double p() const noexcept { return p_; }

 private:
  double p_;
};

}  // namespace gls
