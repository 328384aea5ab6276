#pragma once

#include "robin/geometry.hpp"
#include "robin/measurements.hpp"

namespace robin {

// Pairwise and 4-point compatibility tests. Each test is sound: when it
// fails, at least one of the measurements involved is an outlier.

/// Relative rotation between two samples of the same rotation: dist(R_i, R_j) <= 2 beta.
bool test_rotation_pair(const Rotation& r_i, const Rotation& r_j, NoiseBound bound);

/// Rigid motions preserve distances: | |b_j - b_i| - |a_j - a_i| | <= 2 beta.
bool test_point_pair(const Vec3& a_i, const Vec3& a_j, const Vec3& b_i, const Vec3& b_j,
                     NoiseBound bound);

/// Normal condition |acos(c_b) - acos(c_a)| <= 2 beta_n in trig-free form, with
/// cos_2beta = cos(2 beta_n) precomputed. c_a and c_b are clamped to [-1, 1].
bool normal_angles_compatible(double c_a, double c_b, double cos_2beta);

/// Point distance condition with point_bound, and normal angle condition with normal_bound.
bool test_point_normal_pair(const PointNormalPair& pair_i, const PointNormalPair& pair_j,
                            NoiseBound point_bound, NoiseBound normal_bound);

/// (p)^v = (p_x / p_z, p_y / p_z).
Vec2 perspective_normalize(const Vec3& p);

/// Largest distance from the points to their total-least-squares line.
double collinearity_residual(const Vec3& p1, const Vec3& p2, const Vec3& p3, const Vec3& p4);

inline constexpr double kCollinearityTolerance = 1e-6;

/// Cross ratio (|p1p2| |p3p4|) / (|p1p3| |p2p4|) of the normalized projections.
/// Throws DegenerateSubset for non-collinear input, points with p_z <= 0 or a
/// denominator distance below 1e-12.
double cross_ratio_3d(const Vec3& p1, const Vec3& p2, const Vec3& p3, const Vec3& p4);

/// Open interval (lower, upper) that must contain the 3D cross ratio if all
/// four pixel observations are inliers. lower = 0 and upper = +inf when the
/// corresponding bound is vacuous.
struct CrossRatioInterval {
  double lower;
  double upper;

  bool contains(double tau) const { return lower < tau && tau < upper; }
};

/// Interval from the pixel distances |y12|, |y34|, |y13|, |y24| and bound beta.
CrossRatioInterval cross_ratio_interval(double d12, double d34, double d13, double d24,
                                        double beta);

bool test_cross_ratio(const Vec2& y1, const Vec2& y2, const Vec2& y3, const Vec2& y4, double tau,
                      NoiseBound bound);

}  // namespace robin
