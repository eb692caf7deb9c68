#pragma once

#include <stdexcept>
#include <string>

#include "gptt/linalg.hpp"

namespace gptt {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live on different systems or have incompatible sizes.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A vector that should be a state falls outside the state cone.
class ConeViolation : public Error {
 public:
  ConeViolation(const std::string& what, double distance)
      : Error(what), distance_(distance) {}
  double distance() const { return distance_; }

 private:
  double distance_;
};

/// Composite system or composite channel is not defined.
class CompositionError : public Error {
 public:
  using Error::Error;
};

/// Operation needs structure the system lacks (composite, sectors, ...).
class StructureError : public Error {
 public:
  using Error::Error;
};

/// Operation not available for this model family.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Function of an observable is undefined at one of its eigenvalues.
class DomainError : public Error {
 public:
  DomainError(const std::string& what, double at) : Error(what), at_(at) {}
  double at() const { return at_; }

 private:
  double at_;
};

/// The peel loop could not produce a set of perfectly distinguishable
/// eigenstates; carries the last unresolved remainder.
class DiagonalizationFailure : public Error {
 public:
  DiagonalizationFailure(const std::string& what, Vec residue)
      : Error(what), residue_(std::move(residue)) {}
  const Vec& residue() const { return residue_; }

 private:
  Vec residue_;
};

}  // namespace gptt
