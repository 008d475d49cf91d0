#pragma once

#include <stdexcept>
#include <string>

namespace curvedcc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// |q_i . q_j| outside the admissible range for a distance.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A pair closer than d_min (or antipodal on S^3).
class SingularConfigurationError : public Error {
 public:
  SingularConfigurationError(const std::string& what, int i, int j)
      : Error(what), first(i), second(j) {}
  int first;
  int second;
};

// Point outside the domain of an angle chart.
class ChartError : public Error {
 public:
  using Error::Error;
};

// Point off S^3 / H^3 beyond eps_mfld.
class ManifoldError : public Error {
 public:
  ManifoldError(const std::string& what, int index) : Error(what), particle(index) {}
  int particle;
};

// Iterative solver failed to converge or left its admissible region.
class SolverError : public Error {
 public:
  using Error::Error;
};

// Malformed configuration or experiment file.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace curvedcc
