#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "robin/errors.hpp"
#include "robin/gnc.hpp"
#include "robin/registration.hpp"
#include "test_support.hpp"

using namespace robin;
using robin::support::Rng;

namespace {

constexpr double kPi = std::numbers::pi;

double horn_objective(const PointPairs& pp, const WeightVector& w, const RigidTransform& x) {
  double f = 0.0;
  for (std::size_t i = 0; i < pp.pairs.size(); ++i) {
    f += w[i] * (pp.pairs[i].b - x.apply(pp.pairs[i].a)).squaredNorm();
  }
  return f;
}

double pn_objective(const PointNormalPairs& pn, const WeightVector& w, const PnConfig& cfg,
                    const RigidTransform& x) {
  double f = 0.0;
  for (std::size_t i = 0; i < pn.pairs.size(); ++i) {
    const auto& p = pn.pairs[i];
    f += w[i] * cfg.eta[i] * (p.b - x.apply(p.a)).squaredNorm();
    f += w[i] * cfg.kappa[i] * (p.nb.vec() - x.rotation * p.ma.vec()).squaredNorm();
  }
  return f;
}

double chordal_objective(const RotationSamples& rs, const WeightVector& w, const Rotation& r) {
  double f = 0.0;
  for (std::size_t i = 0; i < rs.rotations.size(); ++i) {
    f += w[i] * (r.matrix() - rs.rotations[i].matrix()).squaredNorm();
  }
  return f;
}

// Random candidate near the optimum (half of them) or anywhere (the other half).
RigidTransform random_candidate(Rng& rng, const RigidTransform& center, int k) {
  if (k % 2 == 0) return support::random_transform(rng);
  std::normal_distribution<double> n(0.0, 1.0);
  const double scale = std::pow(10.0, -1.0 - (k % 7) * 0.5);
  return RigidTransform{exp_so3(scale * Vec3(n(rng), n(rng), n(rng))) * center.rotation,
                        center.translation + scale * Vec3(n(rng), n(rng), n(rng))};
}

WeightVector random_weights(Rng& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> w(n);
  for (auto& x : w) x = u(rng);
  return WeightVector(w);
}

Vec3 gaussian3(Rng& rng, double sigma) {
  if (sigma == 0.0) return Vec3::Zero();
  std::normal_distribution<double> n(0.0, sigma);
  return Vec3(n(rng), n(rng), n(rng));
}

PointPairs noisy_pairs(Rng& rng, const RigidTransform& g, std::size_t n, double sigma) {
  PointPairs pp{{}, NoiseBound(5.54 * std::max(sigma, 1e-3))};
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 a = support::uniform_in_cube(rng);
    pp.pairs.push_back({a, g.apply(a) + gaussian3(rng, sigma)});
  }
  return pp;
}

PointNormalPairs noisy_normal_pairs(Rng& rng, const RigidTransform& g, std::size_t n,
                                    double sigma, double sigma_n) {
  PointNormalPairs pn{{}, NoiseBound(5.54 * std::max(sigma, 1e-3)),
                      NoiseBound(5.54 * std::max(sigma_n, 1e-3))};
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 a = support::uniform_in_cube(rng);
    const Vec3 m = support::random_unit(rng);
    const Vec3 nu = gaussian3(rng, sigma_n);
    pn.pairs.push_back({a, UnitVector3::normalized(m), g.apply(a) + gaussian3(rng, sigma),
                        UnitVector3::normalized(exp_so3(nu) * (g.rotation * m))});
  }
  return pn;
}

// --- WeightVector / configs -------------------------------------------------

TEST(WeightVector, Validates) {
  EXPECT_THROW(WeightVector({0.5, 1.5}), std::invalid_argument);
  EXPECT_THROW(WeightVector({-0.1}), std::invalid_argument);
  EXPECT_NO_THROW(WeightVector({0.0, 1.0}));
  EXPECT_EQ(WeightVector::ones(3).size(), 3u);
}

TEST(PnConfig, Validates) {
  EXPECT_THROW(PnConfig::uniform(2, 0.0, 1.0).validate(2), std::invalid_argument);
  EXPECT_THROW(PnConfig::uniform(2, 1.0, -1.0).validate(2), std::invalid_argument);
  EXPECT_THROW(PnConfig::uniform(2, 1.0, 1.0).validate(3), std::invalid_argument);
  EXPECT_NO_THROW(PnConfig::uniform(2, 1.0, 0.0).validate(2));
}

// --- Horn -------------------------------------------------------------------

TEST(Horn, IdentityProblem) {
  Rng rng(1);
  PointPairs pp{{}, NoiseBound(0.01)};
  for (int i = 0; i < 10; ++i) {
    const Vec3 a = support::uniform_in_cube(rng);
    pp.pairs.push_back({a, a});
  }
  const auto x = horn_registration(pp, WeightVector::ones(10));
  EXPECT_LT((x.rotation.matrix() - Mat3::Identity()).norm(), 1e-12);
  EXPECT_LT(x.translation.norm(), 1e-12);
}

TEST(Horn, NoiselessRecovery) {
  Rng rng(2);
  for (int k = 0; k < 100; ++k) {
    const RigidTransform g = support::random_transform(rng);
    const PointPairs pp = noisy_pairs(rng, g, 20, 0.0);
    const auto x = horn_registration(pp, random_weights(rng, 20));
    EXPECT_LT(geodesic_distance(x.rotation, g.rotation), 1e-9);
    EXPECT_LT((x.translation - g.translation).norm(), 1e-9);
  }
}

TEST(Horn, BeatsRandomSearch) {
  Rng rng(3);
  for (int k = 0; k < 10; ++k) {
    const RigidTransform g = support::random_transform(rng);
    const PointPairs pp = noisy_pairs(rng, g, 30, 0.01);
    const WeightVector w = random_weights(rng, 30);
    const auto x = horn_registration(pp, w);
    const double best = horn_objective(pp, w, x);
    for (int c = 0; c < 10000; ++c) {
      ASSERT_LE(best, horn_objective(pp, w, random_candidate(rng, x, c)) + 1e-12);
    }
  }
}

TEST(Horn, Equivariance) {
  Rng rng(4);
  for (int k = 0; k < 50; ++k) {
    const PointPairs pp = noisy_pairs(rng, support::random_transform(rng), 15, 0.05);
    const RigidTransform ga = support::random_transform(rng);
    const RigidTransform gb = support::random_transform(rng);
    PointPairs moved = pp;
    for (auto& p : moved.pairs) {
      p.a = ga.apply(p.a);
      p.b = gb.apply(p.b);
    }
    const WeightVector w = WeightVector::ones(15);
    const auto x = horn_registration(pp, w);
    const auto y = horn_registration(moved, w);
    // Expect y = gb * x * ga^-1.
    const Rotation r = gb.rotation * x.rotation * ga.rotation.inverse();
    const Vec3 t = gb.rotation * (x.translation - x.rotation * (ga.rotation.inverse() * ga.translation)) +
                   gb.translation;
    EXPECT_LT(geodesic_distance(y.rotation, r), 1e-9);
    EXPECT_LT((y.translation - t).norm(), 1e-9);
  }
}

TEST(Horn, PlanarSupportIsAccepted) {
  const RigidTransform g{exp_so3(Vec3(0.2, -0.4, 0.9)), Vec3(0.1, 0.2, 0.3)};
  PointPairs pp{{}, NoiseBound(0.01)};
  for (const Vec3 a : {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(1, 1, 0)}) {
    pp.pairs.push_back({a, g.apply(a)});
  }
  const auto x = horn_registration(pp, WeightVector::ones(4));
  EXPECT_LT(geodesic_distance(x.rotation, g.rotation), 1e-9);
}

TEST(Horn, DegenerateSupportThrows) {
  PointPairs pp{{}, NoiseBound(0.01)};
  for (double s : {0.0, 1.0, 2.0, 3.0}) pp.pairs.push_back({Vec3(s, 0, 0), Vec3(s, 0, 0)});
  EXPECT_THROW(horn_registration(pp, WeightVector::ones(4)), DegenerateGeometry);
  PointPairs two{{pp.pairs[0], pp.pairs[1]}, NoiseBound(0.01)};
  EXPECT_THROW(horn_registration(two, WeightVector::ones(2)), DegenerateGeometry);
  Rng rng(5);
  const PointPairs ok = noisy_pairs(rng, support::random_transform(rng), 5, 0.01);
  EXPECT_THROW(horn_registration(ok, WeightVector({1, 1, 0, 0, 0})), DegenerateGeometry);
}

// --- point with normal ------------------------------------------------------

TEST(PointNormal, IdentityProblem) {
  Rng rng(6);
  const PointNormalPairs pn =
      noisy_normal_pairs(rng, RigidTransform{Rotation(), Vec3::Zero()}, 10, 0.0, 0.0);
  const auto x = point_normal_registration(pn, WeightVector::ones(10), PnConfig::uniform(10, 1, 1));
  EXPECT_LT((x.rotation.matrix() - Mat3::Identity()).norm(), 1e-12);
  EXPECT_LT(x.translation.norm(), 1e-12);
}

TEST(PointNormal, ExactTransformRecoveredWithZeroObjective) {
  Rng rng(7);
  for (int k = 0; k < 100; ++k) {
    const RigidTransform g = support::random_transform(rng);
    const PointNormalPairs pn = noisy_normal_pairs(rng, g, 8, 0.0, 0.0);
    const PnConfig cfg = PnConfig::uniform(8, 1.0, 2.0);
    const auto x = point_normal_registration(pn, WeightVector::ones(8), cfg);
    EXPECT_LT(geodesic_distance(x.rotation, g.rotation), 1e-9);
    EXPECT_LT((x.translation - g.translation).norm(), 1e-9);
    EXPECT_LT(pn_objective(pn, WeightVector::ones(8), cfg, x), 1e-18);
  }
}

TEST(PointNormal, TwoPairsSuffice) {
  Rng rng(8);
  const RigidTransform g = support::random_transform(rng);
  const PointNormalPairs pn = noisy_normal_pairs(rng, g, 2, 0.0, 0.0);
  const auto x = point_normal_registration(pn, WeightVector::ones(2), PnConfig::uniform(2, 1, 1));
  EXPECT_LT(geodesic_distance(x.rotation, g.rotation), 1e-9);
}

TEST(PointNormal, KappaZeroLimitMatchesHorn) {
  Rng rng(9);
  for (int k = 0; k < 50; ++k) {
    const PointNormalPairs pn = noisy_normal_pairs(rng, support::random_transform(rng), 12, 0.02, 0.05);
    PointPairs pp{{}, NoiseBound(1.0)};
    for (const auto& p : pn.pairs) pp.pairs.push_back({p.a, p.b});
    const WeightVector w = random_weights(rng, 12);
    const auto x = point_normal_registration(pn, w, PnConfig::uniform(12, 1.0, 0.0));
    const auto y = horn_registration(pp, w);
    EXPECT_LT(geodesic_distance(x.rotation, y.rotation), 1e-9);
    EXPECT_LT((x.translation - y.translation).norm(), 1e-9);
  }
}

TEST(PointNormal, GlobalOptimalityAgainstRandomSearch) {
  Rng rng(10);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  for (int k = 0; k < 10; ++k) {
    const PointNormalPairs pn = noisy_normal_pairs(rng, support::random_transform(rng), 10, 0.05, 0.1);
    PnConfig cfg;
    for (int i = 0; i < 10; ++i) {
      cfg.eta.push_back(u(rng));
      cfg.kappa.push_back(u(rng));
    }
    const WeightVector w = random_weights(rng, 10);
    const auto x = point_normal_registration(pn, w, cfg);
    const double best = pn_objective(pn, w, cfg, x);
    for (int c = 0; c < 10000; ++c) {
      ASSERT_LE(best, pn_objective(pn, w, cfg, random_candidate(rng, x, c)) + 1e-12);
    }
  }
}

TEST(PointNormal, DegenerateThrows) {
  // One pair: points give nothing, one normal fixes only a rank-1 M.
  PointNormalPairs pn{{{Vec3(0, 0, 0), UnitVector3::from_unit(Vec3(0, 0, 1)), Vec3(1, 0, 0),
                        UnitVector3::from_unit(Vec3(0, 0, 1))}},
                      NoiseBound(0.1), NoiseBound(0.1)};
  EXPECT_THROW(point_normal_registration(pn, WeightVector::ones(1), PnConfig::uniform(1, 1, 1)),
               DegenerateGeometry);
}

// --- rotation averaging -----------------------------------------------------

TEST(ChordalMean, EqualSamples) {
  Rng rng(11);
  const Rotation r0 = support::random_rotation(rng);
  const RotationSamples rs{{r0, r0, r0}, NoiseBound(0.1)};
  EXPECT_LT(geodesic_distance(rotation_mean_chordal(rs, WeightVector::ones(3)), r0), 1e-12);
}

TEST(ChordalMean, SymmetricPair) {
  Rng rng(12);
  const Rotation r0 = support::random_rotation(rng);
  const RotationSamples rs{{exp_so3(Vec3(0, 0, 0.4)) * r0, exp_so3(Vec3(0, 0, -0.4)) * r0},
                           NoiseBound(0.5)};
  EXPECT_LT(geodesic_distance(rotation_mean_chordal(rs, WeightVector::ones(2)), r0), 1e-12);
}

TEST(ChordalMean, BeatsRandomSearch) {
  Rng rng(13);
  for (int k = 0; k < 10; ++k) {
    RotationSamples rs{{}, NoiseBound(0.5)};
    const Rotation center = support::random_rotation(rng);
    for (int i = 0; i < 12; ++i) {
      rs.rotations.push_back(exp_so3(0.6 * support::random_unit(rng)) * center);
    }
    const WeightVector w = random_weights(rng, 12);
    const Rotation r = rotation_mean_chordal(rs, w);
    const double best = chordal_objective(rs, w, r);
    for (int c = 0; c < 10000; ++c) {
      const Rotation cand = random_candidate(rng, RigidTransform{r, Vec3::Zero()}, c).rotation;
      ASSERT_LE(best, chordal_objective(rs, w, cand) + 1e-12);
    }
  }
}

TEST(ChordalMean, ZeroWeightsThrow) {
  const RotationSamples rs{{Rotation(), Rotation()}, NoiseBound(0.1)};
  EXPECT_THROW(rotation_mean_chordal(rs, WeightVector({0.0, 0.0})), DegenerateGeometry);
  // Two half turns about orthogonal axes cancel the sum to a rank-1 matrix.
  const RotationSamples half{{exp_so3(Vec3(kPi, 0, 0)), exp_so3(Vec3(0, kPi, 0))}, NoiseBound(0.1)};
  EXPECT_THROW(rotation_mean_chordal(half, WeightVector::ones(2)), DegenerateGeometry);
}

TEST(RotavgResidual, MatchesGeodesic) {
  EXPECT_EQ(rotavg_residual(Rotation(), Rotation()), 0.0);
  EXPECT_NEAR(rotavg_residual(Rotation(), exp_so3(Vec3(kPi, 0, 0))), kPi, 1e-12);
  Rng rng(14);
  const auto q1 = support::random_quaternion(rng), q2 = support::random_quaternion(rng);
  EXPECT_NEAR(rotavg_residual(Rotation::from_matrix(support::quaternion_matrix(q1)),
                              Rotation::from_matrix(support::quaternion_matrix(q2))),
              support::quaternion_angle(q1, q2), 1e-9);
}

// --- GNC --------------------------------------------------------------------

TEST(GncWeight, ClosedForm) {
  const double eps2 = 1.0;
  EXPECT_EQ(gnc_tls_weight(0.0, eps2, 1.0), 1.0);
  EXPECT_EQ(gnc_tls_weight(0.5, eps2, 1.0), 1.0);  // r2 <= mu/(mu+1) eps2
  EXPECT_EQ(gnc_tls_weight(2.0, eps2, 1.0), 0.0);  // r2 >= (mu+1)/mu eps2
  EXPECT_NEAR(gnc_tls_weight(1.0, eps2, 1.0), std::sqrt(2.0) - 1.0, 1e-15);
  // r2 = eps2 with growing mu: sqrt(mu(mu+1)) - mu -> 1/2.
  for (double mu : {1e2, 1e4, 1e6}) {
    EXPECT_NEAR(gnc_tls_weight(1.0, eps2, mu), std::sqrt(mu * (mu + 1)) - mu, 1e-9);
  }
  EXPECT_NEAR(gnc_tls_weight(1.0, eps2, 1e6), 0.5, 1e-6);
  EXPECT_NEAR(gnc_tls_weight(0.3, 0.4, 2.0), std::sqrt(0.4 * 2.0 * 3.0 / 0.3) - 2.0, 1e-15);
}

TEST(GncConfig, Validates) {
  EXPECT_THROW(GncConfig::uniform(3, 0.1).validate(4), std::invalid_argument);
  EXPECT_THROW(GncConfig::uniform(3, -0.1).validate(3), std::invalid_argument);
  auto cfg = GncConfig::uniform(3, 0.1);
  cfg.mu_update_factor = 1.0;
  EXPECT_THROW(cfg.validate(3), std::invalid_argument);
}

TEST(Gnc, NoOutliersMatchesLeastSquares) {
  Rng rng(15);
  for (int k = 0; k < 20; ++k) {
    const RigidTransform g = support::random_transform(rng);
    const PointPairs pp = noisy_pairs(rng, g, 50, 0.01);
    const RegistrationProblem problem(pp);
    const auto res = gnc_tls(problem, GncConfig::uniform(50, 5.54 * 0.01));
    const auto ls = horn_registration(pp, WeightVector::ones(50));
    EXPECT_LT(geodesic_distance(res.estimate.rotation, ls.rotation), 1e-6);
    EXPECT_LT((res.estimate.translation - ls.translation).norm(), 1e-6);
    for (double w : res.weights.values()) EXPECT_GE(w, 0.99);
  }
}

TEST(Gnc, PlantedOutliersGetZeroWeight) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const RigidTransform g = support::random_transform(rng);
    PointPairs pp = noisy_pairs(rng, g, 100, 0.01);
    std::vector<bool> outlier(100, false);
    for (int i = 0; i < 20; ++i) {
      outlier[i * 5] = true;
      pp.pairs[i * 5].b = g.apply(pp.pairs[i * 5].a) + (1.0 + support::uniform_in_cube(rng).x()) *
                                                          support::random_unit(rng);
    }
    const auto res = gnc_tls(RegistrationProblem(pp), GncConfig::uniform(100, 0.1));
    EXPECT_TRUE(res.converged);
    for (std::size_t i = 0; i < 100; ++i) {
      if (outlier[i]) {
        EXPECT_LT(res.weights[i], 1e-6) << seed << " " << i;
      } else {
        EXPECT_GT(res.weights[i], 1.0 - 1e-6) << seed << " " << i;
      }
    }
    EXPECT_LT(geodesic_distance(res.estimate.rotation, g.rotation), 0.02);
  }
}

TEST(Gnc, TlsCostNoWorseThanLeastSquares) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng rng(100 + seed);
    RotationSamples rs{{}, NoiseBound(0.1)};
    const Rotation truth = support::random_rotation(rng);
    for (int i = 0; i < 40; ++i) {
      rs.rotations.push_back(i % 3 == 0 ? support::random_rotation(rng)
                                        : exp_so3(0.05 * support::random_unit(rng)) * truth);
    }
    const RotationAveragingProblem problem(rs);
    const GncConfig cfg = GncConfig::uniform(40, 0.1);
    const auto res = gnc_tls(problem, cfg);
    const Rotation ls = rotation_mean_chordal(rs, WeightVector::ones(40));
    EXPECT_LE(tls_cost(problem.residuals(res.estimate), cfg),
              tls_cost(problem.residuals(ls), cfg) + 1e-12);
    const auto again = gnc_tls(problem, cfg);
    EXPECT_EQ(res.estimate.matrix(), again.estimate.matrix());
    EXPECT_EQ(res.iterations, again.iterations);
  }
}

TEST(Gnc, RotationAveragingNoOutliers) {
  Rng rng(16);
  for (int k = 0; k < 20; ++k) {
    RotationSamples rs{{}, NoiseBound(0.2)};
    const Rotation truth = support::random_rotation(rng);
    for (int i = 0; i < 30; ++i) rs.rotations.push_back(exp_so3(0.05 * support::random_unit(rng)) * truth);
    const auto res = gnc_tls(RotationAveragingProblem(rs), GncConfig::uniform(30, 0.2));
    EXPECT_LT(geodesic_distance(res.estimate, rotation_mean_chordal(rs, WeightVector::ones(30))),
              1e-6);
  }
}

TEST(Gnc, PointNormalProblemResiduals) {
  Rng rng(17);
  const RigidTransform g = support::random_transform(rng);
  const PointNormalPairs pn = noisy_normal_pairs(rng, g, 20, 0.0, 0.0);
  const PointNormalRegistrationProblem problem(pn, PnConfig::uniform(20, 1.0, 4.0));
  for (double r : problem.residuals(g)) EXPECT_LT(r, 1e-12);
  const RigidTransform shifted{g.rotation, g.translation + Vec3(0.3, 0, 0)};
  for (double r : problem.residuals(shifted)) EXPECT_NEAR(r, 0.3, 1e-12);
  const auto res = gnc_tls(problem, GncConfig::uniform(20, 0.05));
  EXPECT_LT(geodesic_distance(res.estimate.rotation, g.rotation), 1e-9);
}

TEST(Gnc, MaxIterationsReportsNonConvergence) {
  Rng rng(18);
  RotationSamples rs{{}, NoiseBound(0.1)};
  const Rotation truth = support::random_rotation(rng);
  for (int i = 0; i < 40; ++i) {
    rs.rotations.push_back(i % 2 == 0 ? support::random_rotation(rng)
                                      : exp_so3(0.05 * support::random_unit(rng)) * truth);
  }
  GncConfig cfg = GncConfig::uniform(40, 0.1);
  cfg.max_iterations = 2;
  const auto res = gnc_tls(RotationAveragingProblem(rs), cfg);
  EXPECT_FALSE(res.converged);
  EXPECT_EQ(res.iterations, 2u);
}

}  // namespace
