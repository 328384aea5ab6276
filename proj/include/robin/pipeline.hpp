#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "robin/datasets.hpp"
#include "robin/gnc.hpp"
#include "robin/graph_solvers.hpp"
#include "robin/measurements.hpp"
#include "robin/metrics.hpp"
#include "robin/subsets.hpp"

namespace robin {

struct PruneOptions {
  SelectionMode mode = SelectionMode::kMaxClique;
  SubsetBudget budget = SubsetBudget::bounded(kDefaultMaxSubsets);
  TimeBudget time_budget;
};

struct PruneResult {
  InlierSelection selection;
  bool graph_sampled = false;
  std::size_t edge_count = 0;
  double prune_ms = 0.0;
};

/// Builds the compatibility graph and keeps its maximum clique or maximum
/// k-core. Mode none, and sets smaller than the invariant arity, keep every
/// measurement.
PruneResult prune(const MeasurementSet& measurements, const PruneOptions& options);

/// The selection alone.
InlierSelection run_robin(const MeasurementSet& measurements, SelectionMode mode,
                          const SubsetBudget& budget, TimeBudget time_budget = std::nullopt);

/// The measurements at the given indices, in that order, with the same bounds.
MeasurementSet select_measurements(const MeasurementSet& measurements,
                                   std::span<const std::size_t> indices);

struct SolveOptions {
  SolverKind solver = SolverKind::kGnc;
  /// GNC threshold; defaults to the set's noise bound.
  std::optional<double> zeta;
  /// Normal-to-point weight ratio rho for point-with-normal registration.
  double rho = 1.0;
};

struct Estimate {
  std::optional<Rotation> rotation;
  std::optional<Vec3> translation;
  /// GNC weights over the solved measurements.
  std::optional<WeightVector> weights;
  std::size_t iterations = 0;
  bool converged = true;
};

/// Point-with-normal weights: eta = 1, kappa = rho (beta / beta_n)^2.
PnConfig default_pn_config(const PointNormalPairs& pairs, double rho);

/// Runs the requested estimator. Cross-ratio sets have no estimator and give
/// an empty estimate. Throws DegenerateGeometry when the support is too small.
Estimate solve(const MeasurementSet& measurements, const SolveOptions& options);

struct PipelineOptions {
  PruneOptions prune;
  SolveOptions solve;
};

struct PipelineResult {
  PruneResult prune;
  Estimate estimate;
  double solve_ms = 0.0;
  /// Set when the estimator could not run on the selection.
  std::optional<std::string> solve_error;
};

/// prune, then solve on the selected measurements.
PipelineResult run_pipeline(const MeasurementSet& measurements, const PipelineOptions& options);

struct BenchRow {
  ProblemKind problem;
  SelectionMode mode;
  SolverKind solver;
  double outlier_rate;
  std::uint64_t seed;
  RunMetrics metrics;
  bool success;
};

struct BenchOptions {
  ExperimentSpec spec;
  std::vector<double> outlier_rates;
  SubsetBudget budget = SubsetBudget::bounded(kDefaultMaxSubsets);
  TimeBudget time_budget;
  SuccessThresholds thresholds;
  /// Number of worker threads; 0 picks the hardware concurrency.
  std::size_t workers = 0;
};

/// Monte Carlo sweep: spec.n_runs runs per outlier rate, run r using seed
/// spec.rng_seed + r. Rows come back sorted by (rate, seed).
std::vector<BenchRow> run_bench(const BenchOptions& options);

}  // namespace robin
