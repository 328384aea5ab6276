#include "robin/compat_graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_set>

#include <Eigen/Eigenvalues>

#include "robin/errors.hpp"
#include "robin/invariants.hpp"

namespace robin {

CompatGraph::CompatGraph(std::size_t n_vertices, std::vector<Edge> edges) {
  std::vector<std::size_t> degree(n_vertices, 0);
  for (auto& [i, j] : edges) {
    if (i == j) throw std::invalid_argument("self-loop on vertex " + std::to_string(i));
    if (i >= n_vertices || j >= n_vertices) {
      throw std::invalid_argument("edge endpoint out of range");
    }
    if (i > j) std::swap(i, j);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  for (const auto& [i, j] : edges) {
    ++degree[i];
    ++degree[j];
  }
  offsets_.assign(n_vertices + 1, 0);
  for (std::size_t v = 0; v < n_vertices; ++v) offsets_[v + 1] = offsets_[v] + degree[v];
  neighbors_.resize(offsets_.back());
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  // Sorted edge order fills every row in ascending order: a row v first
  // receives its smaller neighbors (as j) and then its larger ones (as i).
  for (const auto& [i, j] : edges) neighbors_[fill[j]++] = i;
  for (const auto& [i, j] : edges) neighbors_[fill[i]++] = j;
}

bool CompatGraph::has_edge(std::size_t i, std::size_t j) const {
  if (i >= vertex_count() || j >= vertex_count()) return false;
  const auto row = neighbors(i);
  return std::binary_search(row.begin(), row.end(), static_cast<std::uint32_t>(j));
}

std::vector<Edge> CompatGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (std::size_t i = 0; i < vertex_count(); ++i) {
    for (auto j : neighbors(i)) {
      if (j > i) out.emplace_back(static_cast<std::uint32_t>(i), j);
    }
  }
  return out;
}

namespace {

// Per-worker edge store: a dense bitmap for small graphs, a hash set of
// packed pairs otherwise. Merging is a set union, so any split of the
// subsets over workers yields the same graph.
class EdgeAccumulator {
 public:
  static constexpr std::size_t kDenseLimit = 8192;

  explicit EdgeAccumulator(std::size_t n) : n_(n), dense_(n <= kDenseLimit) {
    if (dense_) bits_.assign((n * n + 63) / 64, 0);
  }

  void add(std::uint32_t i, std::uint32_t j) {
    if (i > j) std::swap(i, j);
    const std::uint64_t key = static_cast<std::uint64_t>(i) * n_ + j;
    if (dense_) {
      bits_[key >> 6] |= 1ULL << (key & 63);
    } else {
      set_.insert(key);
    }
  }

  void add_all_pairs(std::span<const std::uint32_t> subset) {
    for (std::size_t a = 0; a < subset.size(); ++a) {
      for (std::size_t b = a + 1; b < subset.size(); ++b) add(subset[a], subset[b]);
    }
  }

  void merge(const EdgeAccumulator& other) {
    if (dense_) {
      for (std::size_t w = 0; w < bits_.size(); ++w) bits_[w] |= other.bits_[w];
    } else {
      set_.insert(other.set_.begin(), other.set_.end());
    }
  }

  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    auto emit = [&](std::uint64_t key) {
      out.emplace_back(static_cast<std::uint32_t>(key / n_), static_cast<std::uint32_t>(key % n_));
    };
    if (dense_) {
      for (std::size_t w = 0; w < bits_.size(); ++w) {
        for (std::uint64_t word = bits_[w]; word != 0; word &= word - 1) {
          emit(w * 64 + static_cast<std::uint64_t>(std::countr_zero(word)));
        }
      }
    } else {
      out.reserve(set_.size());
      for (auto key : set_) emit(key);
    }
    return out;
  }

 private:
  std::size_t n_;
  bool dense_;
  std::vector<std::uint64_t> bits_;
  std::unordered_set<std::uint64_t> set_;
};

template <typename Test>
CompatGraph build_with(std::size_t n, std::size_t arity, const SubsetBudget& budget,
                       const Test& passes) {
  const SubsetEnumeration subsets = enumerate_subsets(n, arity, budget);
  constexpr std::uint64_t kSubsetsPerWorker = 250'000;
  const std::uint64_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::uint64_t workers = std::clamp<std::uint64_t>(subsets.size() / kSubsetsPerWorker, 1, hw);

  std::vector<EdgeAccumulator> parts;
  parts.reserve(workers);
  for (std::uint64_t w = 0; w < workers; ++w) parts.emplace_back(n);

  auto run = [&](std::uint64_t w) {
    const std::uint64_t begin = subsets.size() * w / workers;
    const std::uint64_t end = subsets.size() * (w + 1) / workers;
    subsets.for_each_in_range(begin, end, [&](std::span<const std::uint32_t> s) {
      if (passes(s)) parts[w].add_all_pairs(s);
    });
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> threads;
    for (std::uint64_t w = 0; w < workers; ++w) threads.emplace_back(run, w);
  }
  for (std::uint64_t w = 1; w < workers; ++w) parts[0].merge(parts[w]);

  CompatGraph g(n, parts[0].edges());
  g.set_sampled(subsets.sampled());
  return g;
}

bool all_collinear_in_front(const std::vector<Correspondence2D3D>& cs) {
  for (const auto& c : cs) {
    if (!(c.p.z() > 0.0)) return false;
  }
  Vec3 centroid = Vec3::Zero();
  for (const auto& c : cs) centroid += c.p;
  centroid /= static_cast<double>(cs.size());
  Mat3 scatter = Mat3::Zero();
  for (const auto& c : cs) scatter += (c.p - centroid) * (c.p - centroid).transpose();
  Eigen::SelfAdjointEigenSolver<Mat3> eig(scatter);
  const Vec3 dir = eig.eigenvectors().col(2);
  for (const auto& c : cs) {
    const Vec3 d = c.p - centroid;
    if ((d - d.dot(dir) * dir).norm() >= 0.25 * kCollinearityTolerance) return false;
  }
  return true;
}

CompatGraph build_cross_ratio_graph(const Camera2D3D& cam, const SubsetBudget& budget) {
  const auto& cs = cam.correspondences;
  const std::size_t n = cs.size();
  const double beta = cam.bound.value();

  if (!all_collinear_in_front(cs)) {
    // Mixed configurations: evaluate each quadruple on its own and skip the
    // ones that carry no invariant.
    return build_with(n, 4, budget, [&](std::span<const std::uint32_t> s) {
      try {
        const double tau = cross_ratio_3d(cs[s[0]].p, cs[s[1]].p, cs[s[2]].p, cs[s[3]].p);
        return test_cross_ratio(cs[s[0]].y, cs[s[1]].y, cs[s[2]].y, cs[s[3]].y, tau, cam.bound);
      } catch (const DegenerateSubset&) {
        return false;
      }
    });
  }

  // Whole set on one line: precompute pairwise distances of the normalized
  // projections and of the pixels, then each quadruple is a few flops.
  std::vector<Vec2> normalized(n);
  for (std::size_t i = 0; i < n; ++i) normalized[i] = perspective_normalize(cs[i].p);
  std::vector<double> dp(n * n);
  std::vector<double> dy(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      dp[i * n + j] = (normalized[i] - normalized[j]).norm();
      dy[i * n + j] = (cs[i].y - cs[j].y).norm();
    }
  }
  return build_with(n, 4, budget, [&](std::span<const std::uint32_t> s) {
    const std::size_t i = s[0], j = s[1], k = s[2], l = s[3];
    const double p12 = dp[i * n + j], p34 = dp[k * n + l];
    const double p13 = dp[i * n + k], p24 = dp[j * n + l];
    if (p12 < 1e-12 || p34 < 1e-12 || p13 < 1e-12 || p24 < 1e-12) return false;
    const double tau = (p12 * p34) / (p13 * p24);
    return cross_ratio_interval(dy[i * n + j], dy[k * n + l], dy[i * n + k], dy[j * n + l], beta)
        .contains(tau);
  });
}

}  // namespace

CompatGraph build_graph(const MeasurementSet& measurements, const SubsetBudget& budget) {
  const std::size_t n = measurement_count(measurements);
  const std::size_t arity = invariant_arity(measurements);
  if (n < arity) {
    throw TooFewMeasurements("need at least " + std::to_string(arity) +
                             " measurements to build a compatibility graph, got " +
                             std::to_string(n));
  }

  if (const auto* rot = std::get_if<RotationSamples>(&measurements)) {
    return build_with(n, 2, budget, [&](std::span<const std::uint32_t> s) {
      return test_rotation_pair(rot->rotations[s[0]], rot->rotations[s[1]], rot->bound);
    });
  }
  if (const auto* pp = std::get_if<PointPairs>(&measurements)) {
    return build_with(n, 2, budget, [&](std::span<const std::uint32_t> s) {
      const auto& p = pp->pairs[s[0]];
      const auto& q = pp->pairs[s[1]];
      return test_point_pair(p.a, q.a, p.b, q.b, pp->bound);
    });
  }
  if (const auto* pn = std::get_if<PointNormalPairs>(&measurements)) {
    const double two_beta = 2.0 * pn->normal_bound.value();
    const bool normals_vacuous = two_beta >= std::numbers::pi;
    const double cos_2beta = std::cos(two_beta);
    return build_with(n, 2, budget, [&](std::span<const std::uint32_t> s) {
      const auto& p = pn->pairs[s[0]];
      const auto& q = pn->pairs[s[1]];
      if (!test_point_pair(p.a, q.a, p.b, q.b, pn->point_bound)) return false;
      return normals_vacuous || normal_angles_compatible(p.ma.dot(q.ma), p.nb.dot(q.nb), cos_2beta);
    });
  }
  return build_cross_ratio_graph(std::get<Camera2D3D>(measurements), budget);
}

void write_edge_list(std::ostream& out, const CompatGraph& g) {
  for (const auto& [i, j] : g.edges()) out << i << ' ' << j << '\n';
}

CompatGraph read_edge_list(std::istream& in, std::size_t n_vertices) {
  std::vector<Edge> edges;
  std::size_t max_index = 0;
  bool any = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    long long i = -1, j = -1;
    std::string extra;
    if (!(fields >> i >> j) || (fields >> extra) || i < 0 || j < 0 || i == j) {
      throw InputError("edge list line " + std::to_string(line_no) +
                       ": expected two distinct non-negative vertex indices");
    }
    if (i > static_cast<long long>(UINT32_MAX) || j > static_cast<long long>(UINT32_MAX)) {
      throw InputError("edge list line " + std::to_string(line_no) + ": vertex index too large");
    }
    edges.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
    max_index = std::max<std::size_t>(max_index, static_cast<std::size_t>(std::max(i, j)));
    any = true;
  }
  const std::size_t n = std::max(n_vertices, any ? max_index + 1 : 0);
  return CompatGraph(n, std::move(edges));
}

}  // namespace robin
