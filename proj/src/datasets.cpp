#include "robin/datasets.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "robin/errors.hpp"

namespace robin {

namespace {

using Rng = std::mt19937_64;

constexpr double kDeg = std::numbers::pi / 180.0;

Vec3 random_unit(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec3 v;
  do {
    v = Vec3(n(rng), n(rng), n(rng));
  } while (v.norm() < 1e-12);
  return v.normalized();
}

Rotation random_rotation(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Quaterniond q;
  do {
    q = Eigen::Quaterniond(n(rng), n(rng), n(rng), n(rng));
  } while (q.norm() < 1e-12);
  q.normalize();
  return Rotation::from_matrix(q.toRotationMatrix());
}

Vec3 uniform_in_ball(Rng& rng, double radius) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return radius * std::cbrt(u(rng)) * random_unit(rng);
}

Vec3 uniform_in_cube(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return Vec3(u(rng), u(rng), u(rng));
}

// Isotropic Gaussian noise, redrawn until its norm is within the bound.
template <int D>
Eigen::Matrix<double, D, 1> bounded_noise(Rng& rng, double sigma, double bound) {
  Eigen::Matrix<double, D, 1> e = Eigen::Matrix<double, D, 1>::Zero();
  if (sigma <= 0.0) return e;
  std::normal_distribution<double> n(0.0, sigma);
  do {
    for (int k = 0; k < D; ++k) e(k) = n(rng);
  } while (e.norm() > bound);
  return e;
}

double bounded_scalar(Rng& rng, double sigma, double bound) {
  return bounded_noise<1>(rng, sigma, bound)(0);
}

// Random positions for the outliers; round(N (1 - rate)) inliers remain.
std::vector<bool> inlier_mask(Rng& rng, std::size_t n, double outlier_rate) {
  const auto n_in = static_cast<std::size_t>(
      std::llround(static_cast<double>(n) * (1.0 - outlier_rate)));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<bool> mask(n, false);
  for (std::size_t k = 0; k < std::min(n_in, n); ++k) mask[order[k]] = true;
  return mask;
}

RigidTransform random_ground_truth(Rng& rng) {
  const Rotation r = random_rotation(rng);
  return RigidTransform{r, uniform_in_ball(rng, 1.0)};
}

PointCloud normalize_cloud(const PointCloud& cloud, std::size_t n, Rng& rng) {
  if (cloud.points.empty()) throw InputError("points file: no points");
  if (!cloud.normals.empty() && cloud.normals.size() != cloud.points.size()) {
    throw InputError("points file: normals must be given for every point or none");
  }
  std::vector<std::size_t> keep(cloud.points.size());
  std::iota(keep.begin(), keep.end(), 0);
  if (n < keep.size()) {
    std::shuffle(keep.begin(), keep.end(), rng);
    keep.resize(n);
    std::sort(keep.begin(), keep.end());
  }
  Vec3 lo = cloud.points[keep[0]], hi = lo;
  for (auto i : keep) {
    lo = lo.cwiseMin(cloud.points[i]);
    hi = hi.cwiseMax(cloud.points[i]);
  }
  const double extent = (hi - lo).maxCoeff();
  PointCloud out;
  for (auto i : keep) {
    out.points.push_back(extent > 0.0 ? Vec3((cloud.points[i] - lo) / extent) : Vec3::Zero());
    if (!cloud.normals.empty()) out.normals.push_back(cloud.normals[i].normalized());
  }
  return out;
}

}  // namespace

std::string_view solver_name(SolverKind solver) {
  return solver == SolverKind::kGnc ? "gnc" : "closed-form";
}

SolverKind parse_solver_name(std::string_view name) {
  if (name == "gnc") return SolverKind::kGnc;
  if (name == "closed-form" || name == "closed_form") return SolverKind::kClosedForm;
  throw InputError("unknown solver '" + std::string(name) + "' (expected gnc or closed-form)");
}

ExperimentSpec ExperimentSpec::defaults(ProblemKind problem) {
  ExperimentSpec s;
  s.problem = problem;
  switch (problem) {
    case ProblemKind::kRotationAveraging:
      s.n_measurements = 1000;
      s.noise_sigma = 5.0 * kDeg;
      s.noise_bound = 10.0 * kDeg;
      break;
    case ProblemKind::kRegistration:
    case ProblemKind::kRegistrationNormals:
      s.n_measurements = 1000;
      s.noise_sigma = 0.01;
      s.noise_bound = 5.54 * 0.01;
      s.normal_sigma = 0.01;
      s.normal_bound = 5.54 * 0.01;
      break;
    case ProblemKind::kCrossRatio:
      s.n_measurements = 100;
      s.noise_sigma = 0.1;
      s.noise_bound = 0.25;
      break;
  }
  return s;
}

void ExperimentSpec::validate() const {
  if (n_measurements == 0) throw InputError("n_measurements must be >= 1");
  if (!(outlier_rate >= 0.0 && outlier_rate < 1.0)) {
    throw InputError("outlier_rate must lie in [0, 1)");
  }
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    throw InputError("noise_sigma must be >= 0");
  }
  if (!(noise_bound > 0.0) || !std::isfinite(noise_bound)) {
    throw InputError("noise_bound (beta) must be > 0");
  }
  if (!(normal_sigma >= 0.0) || !(normal_bound > 0.0)) {
    throw InputError("normal noise must be >= 0 with a positive bound");
  }
  if (n_runs == 0) throw InputError("n_runs must be >= 1");
}

Vec2 project_pixel(const Vec3& p) {
  return Vec2(kFocalLength * p.x() / p.z() + 0.5 * kImageWidth,
              kFocalLength * p.y() / p.z() + 0.5 * kImageHeight);
}

Dataset gen_rotavg(const ExperimentSpec& spec, std::uint64_t seed) {
  spec.validate();
  Rng rng(seed);
  const Rotation truth = random_rotation(rng);
  std::vector<bool> mask = inlier_mask(rng, spec.n_measurements, spec.outlier_rate);
  RotationSamples samples{{}, NoiseBound(spec.noise_bound)};
  samples.rotations.reserve(spec.n_measurements);
  for (std::size_t i = 0; i < spec.n_measurements; ++i) {
    if (mask[i]) {
      const double theta = bounded_scalar(rng, spec.noise_sigma, spec.noise_bound);
      samples.rotations.push_back(truth * exp_so3(theta * random_unit(rng)));
    } else {
      samples.rotations.push_back(random_rotation(rng));
    }
  }
  return Dataset{std::move(samples), std::move(mask), truth, std::nullopt};
}

Dataset gen_registration(const ExperimentSpec& spec, std::uint64_t seed, bool with_normals,
                         const PointCloud* source) {
  spec.validate();
  Rng rng(seed);
  const RigidTransform truth = random_ground_truth(rng);

  PointCloud cloud;
  if (source != nullptr) {
    cloud = normalize_cloud(*source, spec.n_measurements, rng);
  } else {
    for (std::size_t i = 0; i < spec.n_measurements; ++i) cloud.points.push_back(uniform_in_cube(rng));
  }
  const std::size_t n = cloud.points.size();
  std::vector<bool> mask = inlier_mask(rng, n, spec.outlier_rate);

  PointPairs pp{{}, NoiseBound(spec.noise_bound)};
  PointNormalPairs pn{{}, NoiseBound(spec.noise_bound), NoiseBound(spec.normal_bound)};
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3& a = cloud.points[i];
    const Vec3 m = cloud.normals.empty() ? random_unit(rng) : cloud.normals[i];
    Vec3 b;
    Vec3 nb;
    if (mask[i]) {
      b = truth.apply(a) + bounded_noise<3>(rng, spec.noise_sigma, spec.noise_bound);
      const Vec3 nu = bounded_noise<3>(rng, spec.normal_sigma, spec.normal_bound);
      nb = exp_so3(nu) * (truth.rotation * m);
    } else {
      b = uniform_in_ball(rng, 5.0);
      nb = random_unit(rng);
    }
    if (with_normals) {
      pn.pairs.push_back({a, UnitVector3::normalized(m), b, UnitVector3::normalized(nb)});
    } else {
      pp.pairs.push_back({a, b});
    }
  }
  if (with_normals) return Dataset{std::move(pn), std::move(mask), truth.rotation, truth.translation};
  return Dataset{std::move(pp), std::move(mask), truth.rotation, truth.translation};
}

Dataset gen_registration_all_to_all(const ExperimentSpec& spec, std::uint64_t seed,
                                    std::size_t n_source, double overlap) {
  spec.validate();
  if (n_source == 0) throw InputError("all-to-all: need at least one source point");
  if (!(overlap > 0.0 && overlap <= 1.0)) throw InputError("overlap must lie in (0, 1]");
  Rng rng(seed);
  const RigidTransform truth = random_ground_truth(rng);
  std::vector<Vec3> a(n_source);
  for (auto& p : a) p = uniform_in_cube(rng);

  std::vector<std::size_t> kept(n_source);
  std::iota(kept.begin(), kept.end(), 0);
  std::shuffle(kept.begin(), kept.end(), rng);
  const auto n_kept = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(overlap * static_cast<double>(n_source))));
  kept.resize(std::min(n_kept, n_source));
  std::sort(kept.begin(), kept.end());

  std::vector<Vec3> b;
  for (auto j : kept) b.push_back(truth.apply(a[j]) + bounded_noise<3>(rng, spec.noise_sigma, spec.noise_bound));

  PointPairs pp{{}, NoiseBound(spec.noise_bound)};
  std::vector<bool> mask;
  for (std::size_t i = 0; i < n_source; ++i) {
    for (std::size_t k = 0; k < kept.size(); ++k) {
      pp.pairs.push_back({a[i], b[k]});
      mask.push_back(kept[k] == i);
    }
  }
  return Dataset{std::move(pp), std::move(mask), truth.rotation, truth.translation};
}

Dataset gen_crossratio(const ExperimentSpec& spec, std::uint64_t seed) {
  spec.validate();
  Rng rng(seed);
  std::uniform_real_distribution<double> px(0.0, kImageWidth), py(0.0, kImageHeight);
  std::uniform_real_distribution<double> depth(2.0, 8.0), s(0.0, 1.0);
  const auto backproject = [&](double u, double v, double z) {
    return Vec3(z * (u - 0.5 * kImageWidth) / kFocalLength,
                z * (v - 0.5 * kImageHeight) / kFocalLength, z);
  };
  // Endpoints at least 100 px apart in the image.
  Vec3 e0, e1;
  do {
    e0 = backproject(px(rng), py(rng), depth(rng));
    e1 = backproject(px(rng), py(rng), depth(rng));
  } while ((project_pixel(e0) - project_pixel(e1)).norm() < 100.0);

  std::vector<bool> mask = inlier_mask(rng, spec.n_measurements, spec.outlier_rate);
  Camera2D3D cam{{}, NoiseBound(spec.noise_bound)};
  for (std::size_t i = 0; i < spec.n_measurements; ++i) {
    const Vec3 p = e0 + s(rng) * (e1 - e0);
    Vec2 y;
    if (mask[i]) {
      y = project_pixel(p) + bounded_noise<2>(rng, spec.noise_sigma, spec.noise_bound);
    } else {
      y = Vec2(px(rng), py(rng));
    }
    cam.correspondences.push_back({p, y});
  }
  return Dataset{std::move(cam), std::move(mask), std::nullopt, std::nullopt};
}

Dataset generate(const ExperimentSpec& spec, std::uint64_t seed) {
  switch (spec.problem) {
    case ProblemKind::kRotationAveraging:
      return gen_rotavg(spec, seed);
    case ProblemKind::kRegistration:
      return gen_registration(spec, seed, false);
    case ProblemKind::kRegistrationNormals:
      return gen_registration(spec, seed, true);
    case ProblemKind::kCrossRatio:
      return gen_crossratio(spec, seed);
  }
  throw std::logic_error("unknown problem kind");
}

}  // namespace robin
