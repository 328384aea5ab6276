#include "robin/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <numeric>
#include <thread>

#include "robin/compat_graph.hpp"
#include "robin/errors.hpp"
#include "robin/registration.hpp"

namespace robin {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

InlierSelection keep_all(std::size_t n, SelectionMode mode) {
  InlierSelection s;
  s.vertices.resize(n);
  std::iota(s.vertices.begin(), s.vertices.end(), 0);
  s.mode = mode;
  return s;
}

template <typename P>
Estimate run_gnc(const P& problem, double zeta) {
  const auto res = gnc_tls(problem, GncConfig::uniform(problem.size(), zeta));
  Estimate e;
  if constexpr (std::is_same_v<typename P::Estimate, Rotation>) {
    e.rotation = res.estimate;
  } else {
    e.rotation = res.estimate.rotation;
    e.translation = res.estimate.translation;
  }
  e.weights = res.weights;
  e.iterations = res.iterations;
  e.converged = res.converged;
  return e;
}

}  // namespace

PruneResult prune(const MeasurementSet& measurements, const PruneOptions& options) {
  const auto t0 = Clock::now();
  const std::size_t n = measurement_count(measurements);
  PruneResult out;
  if (options.mode == SelectionMode::kNone || n < invariant_arity(measurements)) {
    out.selection = keep_all(n, options.mode);
    out.prune_ms = elapsed_ms(t0);
    return out;
  }
  const CompatGraph g = build_graph(measurements, options.budget);
  out.graph_sampled = g.sampled();
  out.edge_count = g.edge_count();
  out.selection = options.mode == SelectionMode::kMaxClique ? max_clique(g, options.time_budget)
                                                            : max_kcore(g);
  out.prune_ms = elapsed_ms(t0);
  return out;
}

InlierSelection run_robin(const MeasurementSet& measurements, SelectionMode mode,
                          const SubsetBudget& budget, TimeBudget time_budget) {
  return prune(measurements, PruneOptions{mode, budget, time_budget}).selection;
}

MeasurementSet select_measurements(const MeasurementSet& measurements,
                                   std::span<const std::size_t> indices) {
  const std::size_t n = measurement_count(measurements);
  for (auto i : indices) {
    if (i >= n) throw std::out_of_range("select_measurements: index out of range");
  }
  return std::visit(
      [&](const auto& set) -> MeasurementSet {
        using T = std::decay_t<decltype(set)>;
        T out = set;
        if constexpr (std::is_same_v<T, RotationSamples>) {
          out.rotations.clear();
          for (auto i : indices) out.rotations.push_back(set.rotations[i]);
        } else if constexpr (std::is_same_v<T, Camera2D3D>) {
          out.correspondences.clear();
          for (auto i : indices) out.correspondences.push_back(set.correspondences[i]);
        } else {
          out.pairs.clear();
          for (auto i : indices) out.pairs.push_back(set.pairs[i]);
        }
        return out;
      },
      measurements);
}

PnConfig default_pn_config(const PointNormalPairs& pairs, double rho) {
  const double ratio = pairs.point_bound.value() / pairs.normal_bound.value();
  return PnConfig::uniform(pairs.pairs.size(), 1.0, rho * ratio * ratio);
}

Estimate solve(const MeasurementSet& measurements, const SolveOptions& options) {
  if (measurement_count(measurements) == 0) {
    throw DegenerateGeometry("no measurements to solve on");
  }
  const bool gnc = options.solver == SolverKind::kGnc;
  if (const auto* rs = std::get_if<RotationSamples>(&measurements)) {
    if (gnc) return run_gnc(RotationAveragingProblem(*rs), options.zeta.value_or(rs->bound.value()));
    Estimate e;
    e.rotation = rotation_mean_chordal(*rs, WeightVector::ones(rs->rotations.size()));
    return e;
  }
  if (const auto* pp = std::get_if<PointPairs>(&measurements)) {
    if (gnc) return run_gnc(RegistrationProblem(*pp), options.zeta.value_or(pp->bound.value()));
    const RigidTransform x = horn_registration(*pp, WeightVector::ones(pp->pairs.size()));
    return Estimate{x.rotation, x.translation, std::nullopt, 0, true};
  }
  if (const auto* pn = std::get_if<PointNormalPairs>(&measurements)) {
    const PnConfig cfg = default_pn_config(*pn, options.rho);
    if (gnc) {
      return run_gnc(PointNormalRegistrationProblem(*pn, cfg),
                     options.zeta.value_or(pn->point_bound.value()));
    }
    const RigidTransform x = point_normal_registration(*pn, WeightVector::ones(pn->pairs.size()), cfg);
    return Estimate{x.rotation, x.translation, std::nullopt, 0, true};
  }
  return Estimate{};
}

PipelineResult run_pipeline(const MeasurementSet& measurements, const PipelineOptions& options) {
  PipelineResult out;
  out.prune = prune(measurements, options.prune);
  if (problem_kind(measurements) == ProblemKind::kCrossRatio) return out;
  const auto t0 = Clock::now();
  try {
    const MeasurementSet chosen = select_measurements(measurements, out.prune.selection.vertices);
    out.estimate = solve(chosen, options.solve);
  } catch (const DegenerateGeometry& e) {
    out.solve_error = e.what();
  }
  out.solve_ms = elapsed_ms(t0);
  return out;
}

std::vector<BenchRow> run_bench(const BenchOptions& options) {
  options.spec.validate();
  struct Task {
    double rate;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (double rate : options.outlier_rates) {
    for (std::size_t r = 0; r < options.spec.n_runs; ++r) {
      tasks.push_back({rate, options.spec.rng_seed + r});
    }
  }
  for (const auto& t : tasks) {
    ExperimentSpec s = options.spec;
    s.outlier_rate = t.rate;
    s.validate();
  }

  std::vector<BenchRow> rows(tasks.size());
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(tasks.size());
  const auto work = [&] {
    for (std::size_t k = next++; k < tasks.size(); k = next++) try {
      ExperimentSpec s = options.spec;
      s.outlier_rate = tasks[k].rate;
      const Dataset data = generate(s, tasks[k].seed);
      PipelineOptions po;
      po.prune.mode = s.mode;
      po.prune.budget = options.budget;
      po.prune.budget.rng_seed = tasks[k].seed;
      po.prune.time_budget = options.time_budget;
      po.solve.solver = s.solver;
      const PipelineResult res = run_pipeline(data.measurements, po);
      const RunMetrics m = evaluate(data, res.prune.selection.vertices,
                                    EstimateView{res.estimate.rotation, res.estimate.translation},
                                    res.prune.prune_ms, res.solve_ms);
      rows[k] = BenchRow{s.problem, s.mode,   s.solver, tasks[k].rate,
                         tasks[k].seed, m, is_success(s.problem, m, options.thresholds)};
    } catch (...) {
      errors[k] = std::current_exception();
    }
  };
  std::size_t workers = options.workers != 0 ? options.workers : std::thread::hardware_concurrency();
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(tasks.size(), 1));
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::stable_sort(rows.begin(), rows.end(), [](const BenchRow& a, const BenchRow& b) {
    return a.outlier_rate != b.outlier_rate ? a.outlier_rate < b.outlier_rate : a.seed < b.seed;
  });
  return rows;
}

}  // namespace robin
