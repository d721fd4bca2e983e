#pragma once

#include <stdexcept>
#include <string>

namespace hypocns {

/// Out-of-range model or operator parameter (e.g. beta outside its admissible interval).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Operator applied to an input it is not defined on (negative Riesz power of a field with nonzero mean).
class DegenerateInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Scalar function evaluated outside its domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Density left the admissible band (rho <= 0, or outside the configured guard bounds).
class VacuumError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CflError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Loss of finiteness during time stepping.
class InstabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// No interpolation exponent theta in [0, 1] balances the Gagliardo-Nirenberg scaling.
class ExponentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Initial-data request that cannot be realised on the given grid.
class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed configuration or violated theorem hypothesis; maps to CLI exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace hypocns
