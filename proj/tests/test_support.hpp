#pragma once

// Random generators and independent reference implementations shared by the tests.

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <cmath>
#include <random>

#include "robin/geometry.hpp"

namespace robin::support {

using Rng = std::mt19937_64;

inline Vec3 random_unit(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec3 v;
  do {
    v = Vec3(n(rng), n(rng), n(rng));
  } while (v.norm() < 1e-9);
  return v.normalized();
}

/// Uniform random unit quaternion.
inline Eigen::Quaterniond random_quaternion(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Vector4d q;
  do {
    q = Eigen::Vector4d(n(rng), n(rng), n(rng), n(rng));
  } while (q.norm() < 1e-9);
  q.normalize();
  return Eigen::Quaterniond(q(0), q(1), q(2), q(3));
}

/// Quaternion to matrix written out by hand, independent of exp_so3.
inline Mat3 quaternion_matrix(const Eigen::Quaterniond& q) {
  const double w = q.w(), x = q.x(), y = q.y(), z = q.z();
  Mat3 m;
  // clang-format off
  m << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z),     2 * (x * z + w * y),
       2 * (x * y + w * z),     1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
       2 * (x * z - w * y),     2 * (y * z + w * x),     1 - 2 * (x * x + y * y);
  // clang-format on
  return m;
}

inline Rotation random_rotation(Rng& rng) {
  return Rotation::from_matrix(quaternion_matrix(random_quaternion(rng)));
}

/// Relative rotation angle from quaternions: 2 atan2(|v|, |w|) of q1^-1 q2.
inline double quaternion_angle(const Eigen::Quaterniond& q1, const Eigen::Quaterniond& q2) {
  const Eigen::Quaterniond rel = q1.conjugate() * q2;
  return 2.0 * std::atan2(rel.vec().norm(), std::abs(rel.w()));
}

/// Axis-angle to quaternion.
inline Eigen::Quaterniond axis_angle_quaternion(const Vec3& v) {
  const double theta = v.norm();
  if (theta == 0.0) return Eigen::Quaterniond(1, 0, 0, 0);
  const Vec3 axis = v / theta;
  return Eigen::Quaterniond(std::cos(theta / 2), std::sin(theta / 2) * axis.x(),
                            std::sin(theta / 2) * axis.y(), std::sin(theta / 2) * axis.z());
}

inline Vec3 uniform_in_cube(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return Vec3(u(rng), u(rng), u(rng));
}

inline RigidTransform random_transform(Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return RigidTransform{random_rotation(rng), Vec3(u(rng), u(rng), u(rng))};
}

}  // namespace robin::support
