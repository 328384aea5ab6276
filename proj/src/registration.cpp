#include "robin/registration.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>

#include "robin/errors.hpp"

namespace robin {

WeightVector::WeightVector(std::vector<double> w) : w_(std::move(w)) {
  for (const double x : w_) {
    if (!std::isfinite(x) || x < 0.0 || x > 1.0) {
      throw std::invalid_argument("weights must lie in [0, 1]");
    }
  }
}

void PnConfig::validate(std::size_t n) const {
  if (eta.size() != n || kappa.size() != n) {
    throw std::invalid_argument("PnConfig sizes do not match the number of pairs");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(eta[i] > 0.0) || !std::isfinite(eta[i])) throw std::invalid_argument("eta_i must be > 0");
    if (!(kappa[i] >= 0.0) || !std::isfinite(kappa[i])) {
      throw std::invalid_argument("kappa_i must be >= 0");
    }
  }
}

namespace {

// argmax_R tr(R^T M) over SO(3). A rank-2 M (planar support) still fixes R
// through the determinant correction; rank <= 1 does not.
Rotation rotation_from_correlation(const Mat3& m) {
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Vector3d s = svd.singularValues();
  if (!(s(0) > 0.0) || s(1) <= 1e-12 * s(0)) {
    throw DegenerateGeometry("rotation is not determined by the support (collinear or empty)");
  }
  if (s(2) > 1e-12) return project_to_so3(m);
  const Mat3& u = svd.matrixU();
  const Mat3& v = svd.matrixV();
  const Eigen::Vector3d d(1.0, 1.0, u.determinant() * v.determinant());
  return Rotation::from_matrix_unchecked(u * d.asDiagonal() * v.transpose());
}

void check_weights(std::size_t n, const WeightVector& weights, std::size_t min_positive,
                   const char* what) {
  if (weights.size() != n) throw std::invalid_argument("weight vector size mismatch");
  std::size_t positive = 0;
  for (std::size_t i = 0; i < n; ++i) positive += weights[i] > 0.0 ? 1 : 0;
  if (positive < min_positive) {
    throw DegenerateGeometry(std::string(what) + ": too few positively weighted measurements");
  }
}

}  // namespace

RigidTransform horn_registration(const PointPairs& pairs, const WeightVector& weights) {
  const std::size_t n = pairs.pairs.size();
  check_weights(n, weights, 3, "horn_registration");

  double total = 0.0;
  Vec3 a_bar = Vec3::Zero();
  Vec3 b_bar = Vec3::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    total += weights[i];
    a_bar += weights[i] * pairs.pairs[i].a;
    b_bar += weights[i] * pairs.pairs[i].b;
  }
  a_bar /= total;
  b_bar /= total;

  Mat3 m = Mat3::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    m += weights[i] * (pairs.pairs[i].b - b_bar) * (pairs.pairs[i].a - a_bar).transpose();
  }
  RigidTransform out;
  out.rotation = rotation_from_correlation(m);
  out.translation = b_bar - out.rotation * a_bar;
  return out;
}

RigidTransform point_normal_registration(const PointNormalPairs& pairs,
                                         const WeightVector& weights, const PnConfig& cfg) {
  const std::size_t n = pairs.pairs.size();
  cfg.validate(n);
  check_weights(n, weights, 2, "point_normal_registration");

  double eta_total = 0.0;
  Vec3 a_bar = Vec3::Zero();
  Vec3 b_bar = Vec3::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    const double eta = weights[i] * cfg.eta[i];
    eta_total += eta;
    a_bar += eta * pairs.pairs[i].a;
    b_bar += eta * pairs.pairs[i].b;
  }
  a_bar /= eta_total;
  b_bar /= eta_total;

  Mat3 m = Mat3::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = pairs.pairs[i];
    m += weights[i] * cfg.eta[i] * (p.b - b_bar) * (p.a - a_bar).transpose();
    m += weights[i] * cfg.kappa[i] * p.nb.vec() * p.ma.vec().transpose();
  }
  RigidTransform out;
  out.rotation = rotation_from_correlation(m);
  out.translation = b_bar - out.rotation * a_bar;
  return out;
}

Rotation rotation_mean_chordal(const RotationSamples& samples, const WeightVector& weights) {
  const std::size_t n = samples.rotations.size();
  check_weights(n, weights, 1, "rotation_mean_chordal");
  Mat3 sum = Mat3::Zero();
  for (std::size_t i = 0; i < n; ++i) sum += weights[i] * samples.rotations[i].matrix();
  try {
    return project_to_so3(sum);
  } catch (const RankDeficient&) {
    throw DegenerateGeometry("weighted rotation sum is rank deficient");
  }
}

double rotavg_residual(const Rotation& estimate, const Rotation& sample) {
  return geodesic_distance(estimate, sample);
}

}  // namespace robin
