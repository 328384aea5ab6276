#pragma once

#include <Eigen/Core>
#include <Eigen/LU>

namespace robin {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Element of SO(3), stored as an orthonormal matrix with det = +1.
class Rotation {
 public:
  static constexpr double kTolerance = 1e-9;

  Rotation() : m_(Mat3::Identity()) {}

  static Rotation identity() { return Rotation(); }

  /// Validates orthonormality and det = +1 within kTolerance.
  /// Throws std::invalid_argument otherwise.
  static Rotation from_matrix(const Mat3& m);

  /// Skips validation; the caller guarantees m is a rotation
  /// (e.g. it came out of an SVD projection).
  static Rotation from_matrix_unchecked(const Mat3& m) { return Rotation(m); }

  const Mat3& matrix() const { return m_; }

  Rotation inverse() const { return Rotation(m_.transpose()); }
  Rotation operator*(const Rotation& other) const { return Rotation(m_ * other.m_); }
  Vec3 operator*(const Vec3& v) const { return m_ * v; }

 private:
  explicit Rotation(const Mat3& m) : m_(m) {}

  Mat3 m_;
};

struct RigidTransform {
  Rotation rotation;
  Vec3 translation = Vec3::Zero();

  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
};

class UnitVector3 {
 public:
  static constexpr double kTolerance = 1e-9;

  UnitVector3() : v_(Vec3::UnitZ()) {}

  /// Throws std::invalid_argument unless |v| = 1 within kTolerance.
  static UnitVector3 from_unit(const Vec3& v);

  /// Throws std::invalid_argument for a (near) zero vector.
  static UnitVector3 normalized(const Vec3& v);

  const Vec3& vec() const { return v_; }
  double dot(const UnitVector3& other) const { return v_.dot(other.v_); }

 private:
  explicit UnitVector3(const Vec3& v) : v_(v) {}

  Vec3 v_;
};

Mat3 hat(const Vec3& v);

/// Rodrigues exponential; Taylor series below 1e-8 rad.
Rotation exp_so3(const Vec3& axis_angle);

/// Inverse of exp_so3, returning the axis-angle vector with norm in [0, pi].
Vec3 log_so3(const Rotation& r);

/// Rotation angle of r1^T r2 in [0, pi].
double geodesic_distance(const Rotation& r1, const Rotation& r2);

/// Nearest rotation in Frobenius norm: U diag(1, 1, det(U)det(V)) V^T.
/// Throws RankDeficient when the smallest singular value is <= 1e-12.
Rotation project_to_so3(const Mat3& m);

}  // namespace robin
