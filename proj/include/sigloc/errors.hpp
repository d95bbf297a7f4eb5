#pragma once

#include <stdexcept>
#include <string>

namespace sigloc {

// Non-finite input where an angle was expected.
struct InvalidAngleError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A lambda point outside its space, or objects built over different spaces
// being mixed (model vs ensemble, ensemble vs ensemble).
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Operation called with inconsistent arguments (e.g. a shift at the wing
// being observed).
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Integration method not applicable to the space (e.g. exact enumeration on
// a space with continuous coordinates).
struct MethodError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Reweighting whose normalisation constant vanishes within tolerance.
struct ZeroMassError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The designated transition set has vanishing equilibrium measure; the
// requested concentrated ensemble does not exist (one-way locality in that
// direction).
struct ZeroMeasureTransitionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Finite-table document failed validation; message carries the JSON path.
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace sigloc
