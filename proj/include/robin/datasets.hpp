#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "robin/geometry.hpp"
#include "robin/graph_solvers.hpp"
#include "robin/measurements.hpp"

namespace robin {

enum class SolverKind { kGnc, kClosedForm };

std::string_view solver_name(SolverKind solver);  // gnc, closed-form
/// Throws InputError for an unknown name.
SolverKind parse_solver_name(std::string_view name);

/// One synthetic experiment configuration. Angles are radians, pixel
/// quantities are pixels, everything else is in point-cloud length units.
struct ExperimentSpec {
  ProblemKind problem = ProblemKind::kRegistration;
  std::size_t n_measurements = 1000;
  double outlier_rate = 0.0;
  double noise_sigma = 0.01;
  double noise_bound = 0.0554;
  /// Normal noise for registration_normals.
  double normal_sigma = 0.01;
  double normal_bound = 0.0554;
  std::size_t n_runs = 1;
  std::uint64_t rng_seed = 0;
  SelectionMode mode = SelectionMode::kMaxClique;
  SolverKind solver = SolverKind::kGnc;

  /// Desk-scale defaults for each problem.
  static ExperimentSpec defaults(ProblemKind problem);

  /// Throws InputError on out-of-range fields.
  void validate() const;
};

/// Measurements plus whatever ground truth is known about them. The inlier
/// mask is empty when unknown.
struct Dataset {
  MeasurementSet measurements;
  std::vector<bool> inliers;
  std::optional<Rotation> rotation;
  std::optional<Vec3> translation;
};

/// Optional real geometry for the registration generator.
struct PointCloud {
  std::vector<Vec3> points;
  std::vector<Vec3> normals;  // empty, or one unit normal per point
};

inline constexpr double kImageWidth = 640.0;
inline constexpr double kImageHeight = 480.0;
inline constexpr double kFocalLength = 500.0;

/// Pinhole projection with principal point at the image center.
Vec2 project_pixel(const Vec3& p);

/// R_i = R Exp(theta_i u_i) with |theta_i| <= beta, outliers uniform on SO(3).
Dataset gen_rotavg(const ExperimentSpec& spec, std::uint64_t seed);

/// b_i = R a_i + t + eps_i with |eps_i| <= beta, |t| <= 1; outlier b_i uniform
/// in a ball of radius 5. Source points are uniform in the unit cube unless a
/// cloud is given, in which case it is rescaled into the unit cube and
/// subsampled to n_measurements when larger.
Dataset gen_registration(const ExperimentSpec& spec, std::uint64_t seed, bool with_normals,
                         const PointCloud* source = nullptr);

/// Correspondence-free registration: n_source cube points, the transformed
/// copy keeps a random fraction `overlap` of them, and every (source, target)
/// pair becomes a putative correspondence. Only pairs (i, i) are inliers.
Dataset gen_registration_all_to_all(const ExperimentSpec& spec, std::uint64_t seed,
                                    std::size_t n_source, double overlap);

/// Collinear points on a random in-view 3D segment, pixel noise bounded by
/// beta, outlier pixels uniform in the image.
Dataset gen_crossratio(const ExperimentSpec& spec, std::uint64_t seed);

/// Dispatches on spec.problem.
Dataset generate(const ExperimentSpec& spec, std::uint64_t seed);

}  // namespace robin
