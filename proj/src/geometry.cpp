#include "robin/geometry.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "robin/errors.hpp"

namespace robin {

namespace {

constexpr double kSmallAngle = 1e-8;

Vec3 vee(const Mat3& skew) { return Vec3(skew(2, 1), skew(0, 2), skew(1, 0)); }

}  // namespace

Rotation Rotation::from_matrix(const Mat3& m) {
  if (!m.allFinite()) throw std::invalid_argument("rotation matrix has non-finite entries");
  if ((m.transpose() * m - Mat3::Identity()).norm() > kTolerance) {
    throw std::invalid_argument("rotation matrix is not orthonormal");
  }
  if (std::abs(m.determinant() - 1.0) > kTolerance) {
    throw std::invalid_argument("rotation matrix does not have det = +1");
  }
  return Rotation(m);
}

UnitVector3 UnitVector3::from_unit(const Vec3& v) {
  if (!v.allFinite() || std::abs(v.norm() - 1.0) > kTolerance) {
    throw std::invalid_argument("vector is not unit length");
  }
  return UnitVector3(v);
}

UnitVector3 UnitVector3::normalized(const Vec3& v) {
  const double n = v.norm();
  if (!std::isfinite(n) || n < 1e-12) throw std::invalid_argument("cannot normalize zero vector");
  return UnitVector3(v / n);
}

Mat3 hat(const Vec3& v) {
  Mat3 s;
  // clang-format off
  s <<  0.0,  -v.z(),  v.y(),
        v.z(),  0.0,  -v.x(),
       -v.y(),  v.x(),  0.0;
  // clang-format on
  return s;
}

Rotation exp_so3(const Vec3& axis_angle) {
  const double theta2 = axis_angle.squaredNorm();
  const double theta = std::sqrt(theta2);
  const Mat3 k = hat(axis_angle);
  double a;  // sin(theta) / theta
  double b;  // (1 - cos(theta)) / theta^2
  if (theta < kSmallAngle) {
    a = 1.0 - theta2 / 6.0;
    b = 0.5 - theta2 / 24.0;
  } else {
    a = std::sin(theta) / theta;
    b = (1.0 - std::cos(theta)) / theta2;
  }
  return Rotation::from_matrix_unchecked(Mat3::Identity() + a * k + b * k * k);
}

Vec3 log_so3(const Rotation& r) {
  const Mat3& m = r.matrix();
  const Vec3 w = 0.5 * vee(m - m.transpose());  // sin(theta) * axis
  const double s = w.norm();
  const double c = 0.5 * (m.trace() - 1.0);
  const double theta = std::atan2(s, c);

  if (theta < kSmallAngle) return w * (1.0 + s * s / 6.0);
  if (s > 1e-6 || c > 0.0) return w * (theta / s);

  // Near a half turn the skew part vanishes; recover the axis from the
  // symmetric part (R + R^T)/2 = cos(theta) I + (1 - cos(theta)) u u^T.
  const Mat3 uut = (0.5 * (m + m.transpose()) - c * Mat3::Identity()) / (1.0 - c);
  Eigen::Index k;
  uut.diagonal().maxCoeff(&k);
  Vec3 u = uut.col(k) / std::sqrt(uut(k, k));
  if (u.dot(w) < 0.0) u = -u;
  return theta * u.normalized();
}

double geodesic_distance(const Rotation& r1, const Rotation& r2) {
  // atan2 form of arccos((trace(r1^T r2) - 1) / 2)
  const Mat3 rel = r1.matrix().transpose() * r2.matrix();
  const double s = 0.5 * vee(rel - rel.transpose()).norm();
  const double c = std::clamp(0.5 * (rel.trace() - 1.0), -1.0, 1.0);
  return std::atan2(s, c);
}

Rotation project_to_so3(const Mat3& m) {
  if (!m.allFinite()) throw RankDeficient("matrix has non-finite entries");
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.singularValues()(2) <= 1e-12) {
    throw RankDeficient("matrix is rank deficient; cannot project to SO(3)");
  }
  const Mat3& u = svd.matrixU();
  const Mat3& v = svd.matrixV();
  Eigen::Vector3d d(1.0, 1.0, u.determinant() * v.determinant());
  return Rotation::from_matrix_unchecked(u * d.asDiagonal() * v.transpose());
}

}  // namespace robin
