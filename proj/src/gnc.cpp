#include "robin/gnc.hpp"

namespace robin {

void GncConfig::validate(std::size_t n) const {
  if (zeta.size() != n) throw std::invalid_argument("GncConfig: zeta size does not match problem");
  for (const double z : zeta) {
    if (!(z > 0.0) || !std::isfinite(z)) throw std::invalid_argument("GncConfig: zeta_i must be > 0");
  }
  if (!(c_bar > 0.0)) throw std::invalid_argument("GncConfig: c_bar must be > 0");
  if (!(mu_update_factor > 1.0)) throw std::invalid_argument("GncConfig: mu_update_factor must be > 1");
  if (!(convergence_tol >= 0.0)) throw std::invalid_argument("GncConfig: convergence_tol must be >= 0");
}

double gnc_tls_weight(double r2, double eps2, double mu) {
  if (r2 <= mu / (mu + 1.0) * eps2) return 1.0;
  if (r2 >= (mu + 1.0) / mu * eps2) return 0.0;
  return std::clamp(std::sqrt(eps2 * mu * (mu + 1.0) / r2) - mu, 0.0, 1.0);
}

double tls_cost(std::span<const double> residuals, const GncConfig& cfg) {
  double cost = 0.0;
  for (std::size_t i = 0; i < residuals.size(); ++i) {
    cost += std::min(residuals[i] * residuals[i] / (cfg.zeta[i] * cfg.zeta[i]), cfg.c_bar * cfg.c_bar);
  }
  return cost;
}

Rotation RotationAveragingProblem::solve_weighted(std::span<const double> w) const {
  return rotation_mean_chordal(samples_, WeightVector(std::vector<double>(w.begin(), w.end())));
}

std::vector<double> RotationAveragingProblem::residuals(const Rotation& estimate) const {
  std::vector<double> r;
  r.reserve(size());
  for (const auto& sample : samples_.rotations) r.push_back(rotavg_residual(estimate, sample));
  return r;
}

RigidTransform RegistrationProblem::solve_weighted(std::span<const double> w) const {
  return horn_registration(pairs_, WeightVector(std::vector<double>(w.begin(), w.end())));
}

std::vector<double> RegistrationProblem::residuals(const RigidTransform& estimate) const {
  std::vector<double> r;
  r.reserve(size());
  for (const auto& p : pairs_.pairs) r.push_back((p.b - estimate.apply(p.a)).norm());
  return r;
}

RigidTransform PointNormalRegistrationProblem::solve_weighted(std::span<const double> w) const {
  return point_normal_registration(pairs_, WeightVector(std::vector<double>(w.begin(), w.end())),
                                   cfg_);
}

std::vector<double> PointNormalRegistrationProblem::residuals(const RigidTransform& estimate) const {
  std::vector<double> r;
  r.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) {
    const auto& p = pairs_.pairs[i];
    const double point = (p.b - estimate.apply(p.a)).squaredNorm();
    const double normal = (p.nb.vec() - estimate.rotation * p.ma.vec()).squaredNorm();
    r.push_back(std::sqrt(cfg_.eta[i] * point + cfg_.kappa[i] * normal));
  }
  return r;
}

}  // namespace robin
