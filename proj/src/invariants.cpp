#include "robin/invariants.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "robin/errors.hpp"

namespace robin {

bool test_rotation_pair(const Rotation& r_i, const Rotation& r_j, NoiseBound bound) {
  return geodesic_distance(r_i, r_j) <= 2.0 * bound.value();
}

bool test_point_pair(const Vec3& a_i, const Vec3& a_j, const Vec3& b_i, const Vec3& b_j,
                     NoiseBound bound) {
  const double da = (a_j - a_i).norm();
  const double db = (b_j - b_i).norm();
  return std::abs(db - da) <= 2.0 * bound.value();
}

bool normal_angles_compatible(double c_a, double c_b, double cos_2beta) {
  c_a = std::clamp(c_a, -1.0, 1.0);
  c_b = std::clamp(c_b, -1.0, 1.0);
  // cos(acos(c_b) - acos(c_a)) = c_a c_b + sqrt((1 - c_a^2)(1 - c_b^2)) >= cos(2 beta).
  // Squaring is only valid when the right side cos(2 beta) - c_a c_b is positive.
  if (cos_2beta - c_a * c_b <= 0.0) return true;
  return 2.0 * cos_2beta * c_a * c_b + 1.0 - c_a * c_a - c_b * c_b >= cos_2beta * cos_2beta;
}

bool test_point_normal_pair(const PointNormalPair& pair_i, const PointNormalPair& pair_j,
                            NoiseBound point_bound, NoiseBound normal_bound) {
  if (!test_point_pair(pair_i.a, pair_j.a, pair_i.b, pair_j.b, point_bound)) return false;
  const double two_beta = 2.0 * normal_bound.value();
  if (two_beta >= std::numbers::pi) return true;
  return normal_angles_compatible(pair_i.ma.dot(pair_j.ma), pair_i.nb.dot(pair_j.nb),
                                  std::cos(two_beta));
}

Vec2 perspective_normalize(const Vec3& p) { return Vec2(p.x() / p.z(), p.y() / p.z()); }

double collinearity_residual(const Vec3& p1, const Vec3& p2, const Vec3& p3, const Vec3& p4) {
  const std::array<Vec3, 4> pts{p1, p2, p3, p4};
  Vec3 centroid = Vec3::Zero();
  for (const auto& p : pts) centroid += p;
  centroid /= 4.0;
  Mat3 scatter = Mat3::Zero();
  for (const auto& p : pts) scatter += (p - centroid) * (p - centroid).transpose();
  Eigen::SelfAdjointEigenSolver<Mat3> eig(scatter);
  const Vec3 dir = eig.eigenvectors().col(2);  // eigenvalues ascending
  double worst = 0.0;
  for (const auto& p : pts) {
    const Vec3 d = p - centroid;
    worst = std::max(worst, (d - d.dot(dir) * dir).norm());
  }
  return worst;
}

double cross_ratio_3d(const Vec3& p1, const Vec3& p2, const Vec3& p3, const Vec3& p4) {
  for (const Vec3* p : {&p1, &p2, &p3, &p4}) {
    if (!(p->z() > 0.0)) throw DegenerateSubset("point is not in front of the camera");
  }
  if (collinearity_residual(p1, p2, p3, p4) >= kCollinearityTolerance) {
    throw DegenerateSubset("points are not collinear");
  }
  const Vec2 v1 = perspective_normalize(p1);
  const Vec2 v2 = perspective_normalize(p2);
  const Vec2 v3 = perspective_normalize(p3);
  const Vec2 v4 = perspective_normalize(p4);
  const double d13 = (v1 - v3).norm();
  const double d24 = (v2 - v4).norm();
  if (d13 < 1e-12 || d24 < 1e-12) throw DegenerateSubset("coincident points in cross ratio");
  const double d12 = (v1 - v2).norm();
  const double d34 = (v3 - v4).norm();
  if (d12 < 1e-12 || d34 < 1e-12) throw DegenerateSubset("coincident points in cross ratio");
  return (d12 * d34) / (d13 * d24);
}

CrossRatioInterval cross_ratio_interval(double d12, double d34, double d13, double d24,
                                        double beta) {
  const double e = 2.0 * beta;
  CrossRatioInterval iv{0.0, std::numeric_limits<double>::infinity()};
  if (d12 - e > 0.0 && d34 - e > 0.0) {
    iv.lower = ((d12 - e) * (d34 - e)) / ((d13 + e) * (d24 + e));
  }
  if (d13 - e > 0.0 && d24 - e > 0.0) {
    iv.upper = ((d12 + e) * (d34 + e)) / ((d13 - e) * (d24 - e));
  }
  return iv;
}

bool test_cross_ratio(const Vec2& y1, const Vec2& y2, const Vec2& y3, const Vec2& y4, double tau,
                      NoiseBound bound) {
  const auto iv = cross_ratio_interval((y1 - y2).norm(), (y3 - y4).norm(), (y1 - y3).norm(),
                                       (y2 - y4).norm(), bound.value());
  return iv.contains(tau);
}

}  // namespace robin
