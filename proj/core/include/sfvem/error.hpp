#pragma once

#include <stdexcept>
#include <string>

namespace sfvem {

/// Base class for every failure reported by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or invalid mesh input (bad file, orientation, topology).
class MeshError : public Error {
 public:
  using Error::Error;
};

/// Degenerate element: empty kernel, singular projector system.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// No admissible projection increment below the search cap.
class ProbeError : public Error {
 public:
  using Error::Error;
};

/// Singular factorization or residual above tolerance.
class SolveError : public Error {
 public:
  using Error::Error;
};

/// Bad experiment configuration or unknown problem name.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace sfvem
