#pragma once

#include <stdexcept>

namespace choquet {

// Base class for every error thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Values of different kind or dimension were combined.
struct KindMismatch : Error {
  using Error::Error;
};

// A lattice operation (sup/inf/positive part/...) was requested on the sym
// kind, which is ordered but not a lattice.
struct LatticeUnsupported : Error {
  using Error::Error;
};

// The Jacobi sweep budget was exhausted before the off-diagonal mass fell
// below the convergence threshold.
struct NoConvergence : Error {
  using Error::Error;
};

// Integration over the empty subset.
struct EmptySubset : Error {
  using Error::Error;
};

// Functions defined on different ground sets were combined.
struct GroundMismatch : Error {
  using Error::Error;
};

// An additive measure was given a weight outside the positive cone.
struct NegativeWeight : Error {
  using Error::Error;
};

// Normalizing a distortion requires mu(X) entrywise positive.
struct NonPositiveTotal : Error {
  using Error::Error;
};

// A matrix square root / power was requested for a value that is not
// positive semidefinite.
struct NotPsd : Error {
  using Error::Error;
};

// Unrecognized builtin operator name.
struct UnknownBuiltin : Error {
  using Error::Error;
};

// The table extracted from an operator does not validate as a capacity.
struct NotMonotone : Error {
  using Error::Error;
};

// A function value does not sit on the grid lattice, or the grid is missing
// a required node (0 or the constant 1).
struct GridMisaligned : Error {
  using Error::Error;
};

// A grid variation was requested between non-comparable endpoints.
struct NotComparable : Error {
  using Error::Error;
};

// Malformed input: files, masks, sizes, parameters.
struct InputError : Error {
  using Error::Error;
};

}  // namespace choquet
