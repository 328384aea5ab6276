#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "robin/geometry.hpp"
#include "robin/measurements.hpp"

namespace robin {

/// Per-measurement weights in [0, 1].
class WeightVector {
 public:
  WeightVector() = default;

  /// Throws std::invalid_argument if any weight is outside [0, 1] or non-finite.
  explicit WeightVector(std::vector<double> w);

  static WeightVector ones(std::size_t n) { return WeightVector(std::vector<double>(n, 1.0)); }

  std::size_t size() const { return w_.size(); }
  double operator[](std::size_t i) const { return w_[i]; }
  std::span<const double> values() const { return w_; }

 private:
  std::vector<double> w_;
};

/// Per-pair weights of the point-with-normal objective
///   sum_i eta_i |b_i - R a_i - t|^2 + kappa_i |n_i - R m_i|^2,
/// where eta_i = 1 / alpha_i^2 and kappa_i = rho_i / beta_i^2.
struct PnConfig {
  std::vector<double> eta;
  std::vector<double> kappa;

  static PnConfig uniform(std::size_t n, double eta, double kappa) {
    return {std::vector<double>(n, eta), std::vector<double>(n, kappa)};
  }

  /// Throws std::invalid_argument unless sizes match n, eta_i > 0 and kappa_i >= 0.
  void validate(std::size_t n) const;
};

/// Weighted closed-form registration (Horn / Kabsch with reflection fix).
/// Throws DegenerateGeometry with fewer than three positively weighted pairs
/// or collinear support.
RigidTransform horn_registration(const PointPairs& pairs, const WeightVector& weights);

/// Globally optimal point-with-normal registration. The weights scale both
/// eta_i and kappa_i. The translation only depends on the point terms.
/// Throws DegenerateGeometry when the rotation is not determined.
RigidTransform point_normal_registration(const PointNormalPairs& pairs,
                                         const WeightVector& weights, const PnConfig& cfg);

/// Chordal L2 mean: project_to_so3(sum_i w_i R_i).
/// Throws DegenerateGeometry if the weights sum to zero or the sum is rank deficient.
Rotation rotation_mean_chordal(const RotationSamples& samples, const WeightVector& weights);

/// Geodesic distance from the estimate to a sample, radians.
double rotavg_residual(const Rotation& estimate, const Rotation& sample);

}  // namespace robin
