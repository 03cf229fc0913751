#pragma once

#include <stdexcept>
#include <string>

namespace phantom {

/// Invalid or inconsistent configuration (bad counts, unknown keys, type mismatch).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A cell or user id that does not exist in the topology.
class LookupError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Argument outside the mathematical domain of an analysis routine.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Numerical procedure failed to converge.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Conditional probability requested on a zero-probability event.
class UndefinedConditionalError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Markov chain has no unique stationary distribution.
class MultiplicityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data (traces, logs) unusable for estimation.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace phantom
