#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "robin/geometry.hpp"

namespace robin {

/// Bound beta on the norm of an inlier's noise. Always strictly positive.
class NoiseBound {
 public:
  /// Throws std::invalid_argument unless beta is finite and > 0.
  explicit NoiseBound(double beta);

  double value() const { return beta_; }

 private:
  double beta_;
};

/// y_i = R_i, noisy copies of an unknown rotation.
struct RotationSamples {
  std::vector<Rotation> rotations;
  NoiseBound bound;
};

/// b_i = R a_i + t + noise.
struct PointPair {
  Vec3 a;
  Vec3 b;
};

struct PointPairs {
  std::vector<PointPair> pairs;
  NoiseBound bound;
};

/// Point pair plus normals: n_b = Exp(nu) R m_a.
struct PointNormalPair {
  Vec3 a;
  UnitVector3 ma;
  Vec3 b;
  UnitVector3 nb;
};

struct PointNormalPairs {
  std::vector<PointNormalPair> pairs;
  NoiseBound point_bound;
  NoiseBound normal_bound;  // radians
};

/// 3D point in the camera frame (p.z() > 0) and its pixel observation.
struct Correspondence2D3D {
  Vec3 p;
  Vec2 y;
};

struct Camera2D3D {
  std::vector<Correspondence2D3D> correspondences;
  NoiseBound bound;  // pixels
};

using MeasurementSet = std::variant<RotationSamples, PointPairs, PointNormalPairs, Camera2D3D>;

enum class ProblemKind { kRotationAveraging, kRegistration, kRegistrationNormals, kCrossRatio };

ProblemKind problem_kind(const MeasurementSet& set);

/// Wire names: rotavg, registration, registration_normals, crossratio.
std::string_view problem_name(ProblemKind kind);

/// Throws InputError for an unknown name.
ProblemKind parse_problem_name(std::string_view name);

std::size_t measurement_count(const MeasurementSet& set);

/// Number of measurements one invariant consumes: 2, or 4 for the cross ratio.
std::size_t invariant_arity(ProblemKind kind);
inline std::size_t invariant_arity(const MeasurementSet& set) {
  return invariant_arity(problem_kind(set));
}

/// Checks N >= 1 and, for 2D-3D sets, that every point lies in front of the camera.
/// Throws InputError naming the first offending measurement.
void validate(const MeasurementSet& set);

}  // namespace robin
