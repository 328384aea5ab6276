#pragma once

#include <stdexcept>
#include <string>

namespace robin {

/// Matrix handed to the SO(3) projection has a vanishing singular value.
class RankDeficient : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A measurement subset on which an invariant cannot be evaluated
/// (non-collinear points, coincident points, points behind the camera).
class DegenerateSubset : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Estimator input whose support is degenerate (collinear points, zero weights).
class DegenerateGeometry : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fewer measurements than the invariant arity.
class TooFewMeasurements : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GraphTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed user input (files, flags). Message names the offending field or line.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace robin
