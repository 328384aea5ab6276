#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "robin/errors.hpp"
#include "robin/registration.hpp"

namespace robin {

struct GncConfig {
  std::vector<double> zeta;  // per-measurement inlier threshold, residual units
  double c_bar = 1.0;
  double mu_update_factor = 1.4;
  std::size_t max_iterations = 100;
  double convergence_tol = 1e-6;  // on max |w_new - w_old|

  static GncConfig uniform(std::size_t n, double zeta) {
    GncConfig cfg;
    cfg.zeta.assign(n, zeta);
    return cfg;
  }

  /// Throws std::invalid_argument on size mismatch or non-positive parameters.
  void validate(std::size_t n) const;
};

/// A robust estimation problem GNC can drive: a weighted least-squares
/// solver and per-measurement residuals r_i >= 0.
template <typename P>
concept GncProblem = requires(const P& p, std::span<const double> w,
                              const typename P::Estimate& e) {
  { p.size() } -> std::convertible_to<std::size_t>;
  { p.solve_weighted(w) } -> std::same_as<typename P::Estimate>;
  { p.residuals(e) } -> std::same_as<std::vector<double>>;
};

template <typename Estimate>
struct GncResult {
  Estimate estimate;
  WeightVector weights;
  std::size_t iterations = 0;
  bool converged = false;
};

/// TLS weight for squared residual r2, squared threshold eps2 = c_bar^2 zeta^2
/// and surrogate parameter mu.
double gnc_tls_weight(double r2, double eps2, double mu);

/// sum_i min(r_i^2 / zeta_i^2, c_bar^2).
double tls_cost(std::span<const double> residuals, const GncConfig& cfg);

/// Graduated non-convexity for the truncated least squares cost. Starts from
/// the all-ones least-squares fit and alternates weight updates with weighted
/// refits while mu grows by mu_update_factor. Stops when the largest weight
/// change drops below convergence_tol (converged = true) or after
/// max_iterations. If every residual of the initial fit is already inside
/// the threshold the least-squares fit is returned as is.
template <GncProblem P>
GncResult<typename P::Estimate> gnc_tls(const P& problem, const GncConfig& cfg) {
  const std::size_t n = problem.size();
  cfg.validate(n);

  std::vector<double> w(n, 1.0);
  auto estimate = problem.solve_weighted(w);
  std::vector<double> r = problem.residuals(estimate);

  std::vector<double> eps2(n);
  double eps2_mean = 0.0;
  double r2_max = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    eps2[i] = cfg.c_bar * cfg.c_bar * cfg.zeta[i] * cfg.zeta[i];
    eps2_mean += eps2[i];
    r2_max = std::max(r2_max, r[i] * r[i]);
  }
  eps2_mean /= static_cast<double>(n);

  GncResult<typename P::Estimate> result{estimate, WeightVector(w), 0, false};
  const double denom = 2.0 * r2_max - eps2_mean;
  if (denom <= 0.0) {
    result.converged = true;
    return result;
  }
  double mu = std::max(eps2_mean / denom, 1e-6);

  for (std::size_t iter = 1; iter <= cfg.max_iterations; ++iter) {
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double updated = gnc_tls_weight(r[i] * r[i], eps2[i], mu);
      change = std::max(change, std::abs(updated - w[i]));
      w[i] = updated;
    }
    try {
      estimate = problem.solve_weighted(w);
    } catch (const DegenerateGeometry&) {
      // Weights collapsed onto a degenerate support; keep the last good fit.
      result.iterations = iter;
      return result;
    }
    r = problem.residuals(estimate);
    mu *= cfg.mu_update_factor;

    result.estimate = estimate;
    result.weights = WeightVector(w);
    result.iterations = iter;
    if (change < cfg.convergence_tol) {
      result.converged = true;
      break;
    }
  }
  return result;
}

// Adapters for the problems the harness solves.

class RotationAveragingProblem {
 public:
  using Estimate = Rotation;
  explicit RotationAveragingProblem(const RotationSamples& samples) : samples_(samples) {}

  std::size_t size() const { return samples_.rotations.size(); }
  Rotation solve_weighted(std::span<const double> w) const;
  std::vector<double> residuals(const Rotation& estimate) const;

 private:
  const RotationSamples& samples_;
};

class RegistrationProblem {
 public:
  using Estimate = RigidTransform;
  explicit RegistrationProblem(const PointPairs& pairs) : pairs_(pairs) {}

  std::size_t size() const { return pairs_.pairs.size(); }
  RigidTransform solve_weighted(std::span<const double> w) const;
  /// |b_i - R a_i - t|
  std::vector<double> residuals(const RigidTransform& estimate) const;

 private:
  const PointPairs& pairs_;
};

class PointNormalRegistrationProblem {
 public:
  using Estimate = RigidTransform;
  PointNormalRegistrationProblem(const PointNormalPairs& pairs, PnConfig cfg)
      : pairs_(pairs), cfg_(std::move(cfg)) {}

  std::size_t size() const { return pairs_.pairs.size(); }
  RigidTransform solve_weighted(std::span<const double> w) const;
  /// sqrt(eta_i |b_i - R a_i - t|^2 + kappa_i |n_i - R m_i|^2)
  std::vector<double> residuals(const RigidTransform& estimate) const;

 private:
  const PointNormalPairs& pairs_;
  PnConfig cfg_;
};

}  // namespace robin
