#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "robin/compat_graph.hpp"
#include "robin/datasets.hpp"
#include "robin/errors.hpp"
#include "robin/io.hpp"
#include "robin/metrics.hpp"
#include "robin/pipeline.hpp"

namespace {

using namespace robin;

struct Options {
  std::string input;
  std::string out;
  std::string mode = "clique";
  std::string solver = "gnc";
  std::string format = "csv";
  std::string problem = "registration";
  std::string budget = std::to_string(kDefaultMaxSubsets);
  std::optional<double> beta;
  std::optional<double> beta_normal;
  std::optional<double> sigma;
  std::optional<std::size_t> n;
  std::optional<double> zeta;
  double rho = 1.0;
  double outlier_rate = 0.0;
  std::vector<double> outlier_rates{0.0, 0.5, 0.9};
  std::uint64_t seed = 0;
  std::size_t runs = 10;
  std::size_t threads = 0;
  std::int64_t time_budget_ms = 0;
  bool no_timing = false;
  std::string points_file;
  std::size_t all_to_all = 0;
  double overlap = 1.0;
  SuccessThresholds thresholds;
};

SubsetBudget parse_budget(const std::string& text, std::uint64_t seed) {
  if (text == "unlimited") return SubsetBudget::unlimited();
  std::uint64_t value = 0;
  std::size_t used = 0;
  try {
    value = std::stoull(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || value == 0 || text.front() == '-') {
    throw InputError("--budget: expected a positive integer or 'unlimited', got '" + text + "'");
  }
  return SubsetBudget::bounded(value, seed);
}

TimeBudget time_budget(const Options& o) {
  if (o.time_budget_ms <= 0) return std::nullopt;
  return std::chrono::milliseconds(o.time_budget_ms);
}

PruneOptions prune_options(const Options& o) {
  return PruneOptions{parse_mode_name(o.mode), parse_budget(o.budget, o.seed), time_budget(o)};
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw InputError(o.out + ": cannot open for writing");
  f << text;
}

Dataset load(const Options& o) {
  return read_measurements_file(o.input, BoundOverrides{o.beta, o.beta_normal});
}

int cmd_prune(const Options& o) {
  const Dataset data = load(o);
  const PruneResult res = prune(data.measurements, prune_options(o));
  std::ostringstream ss;
  write_selection_json(ss, problem_kind(data.measurements), measurement_count(data.measurements), res);
  emit(o, ss.str());
  return 0;
}

int cmd_pipeline(const Options& o, std::initializer_list<ProblemKind> accepted, const char* name) {
  const Dataset data = load(o);
  const ProblemKind kind = problem_kind(data.measurements);
  if (std::find(accepted.begin(), accepted.end(), kind) == accepted.end()) {
    throw InputError(o.input + ": problem '" + std::string(problem_name(kind)) +
                     "' cannot be solved by '" + name + "'");
  }
  PipelineOptions po;
  po.prune = prune_options(o);
  po.solve = SolveOptions{parse_solver_name(o.solver), o.zeta, o.rho};
  const PipelineResult res = run_pipeline(data.measurements, po);

  std::optional<RunMetrics> metrics;
  if (!data.inliers.empty()) {
    metrics = evaluate(data, res.prune.selection.vertices,
                       EstimateView{res.estimate.rotation, res.estimate.translation});
  }
  std::ostringstream ss;
  write_pipeline_json(ss, kind, measurement_count(data.measurements), res, metrics);
  emit(o, ss.str());
  return 0;
}

int cmd_graph(const Options& o) {
  const Dataset data = load(o);
  const CompatGraph g = build_graph(data.measurements, parse_budget(o.budget, o.seed));
  std::ostringstream ss;
  write_edge_list(ss, g);
  emit(o, ss.str());
  return 0;
}

ExperimentSpec experiment_spec(const Options& o) {
  ExperimentSpec spec = ExperimentSpec::defaults(parse_problem_name(o.problem));
  if (o.n) spec.n_measurements = *o.n;
  if (o.sigma) spec.noise_sigma = *o.sigma;
  if (o.beta) spec.noise_bound = *o.beta;
  if (o.beta_normal) spec.normal_bound = *o.beta_normal;
  spec.outlier_rate = o.outlier_rate;
  spec.rng_seed = o.seed;
  spec.n_runs = o.runs;
  spec.mode = parse_mode_name(o.mode);
  spec.solver = parse_solver_name(o.solver);
  return spec;
}

int cmd_generate(const Options& o) {
  const ExperimentSpec spec = experiment_spec(o);
  const auto make = [&]() -> Dataset {
    if (o.all_to_all > 0) {
      if (spec.problem != ProblemKind::kRegistration) {
        throw InputError("--all-to-all: only available for --problem registration");
      }
      return gen_registration_all_to_all(spec, o.seed, o.all_to_all, o.overlap);
    }
    if (!o.points_file.empty()) {
      if (spec.problem != ProblemKind::kRegistration && spec.problem != ProblemKind::kRegistrationNormals) {
        throw InputError("--points-file: only available for registration problems");
      }
      const PointCloud cloud = read_points_file(o.points_file);
      return gen_registration(spec, o.seed, spec.problem == ProblemKind::kRegistrationNormals, &cloud);
    }
    return generate(spec, o.seed);
  };
  const Dataset data = make();
  std::ostringstream ss;
  write_measurements(ss, data);
  emit(o, ss.str());
  return 0;
}

int cmd_bench(const Options& o) {
  BenchOptions bo;
  bo.spec = experiment_spec(o);
  bo.outlier_rates = o.outlier_rates;
  bo.budget = parse_budget(o.budget, o.seed);
  bo.time_budget = time_budget(o);
  bo.thresholds = o.thresholds;
  bo.workers = o.threads;
  const auto rows = run_bench(bo);
  std::ostringstream ss;
  if (o.format == "json") {
    write_bench_json(ss, rows, !o.no_timing);
  } else {
    write_bench_csv(ss, rows, !o.no_timing);
  }
  emit(o, ss.str());
  return 0;
}

void add_prune_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("input", o.input, "Measurement file (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--mode", o.mode, "Inlier selection: clique, kcore or none");
  cmd->add_option("--beta", o.beta, "Noise bound, overrides the file");
  cmd->add_option("--beta-normal", o.beta_normal, "Normal noise bound, overrides the file");
  cmd->add_option("--budget", o.budget, "Max subsets tested, or 'unlimited'");
  cmd->add_option("--seed", o.seed, "Seed for subset sampling");
  cmd->add_option("--time-budget-ms", o.time_budget_ms, "Clique search time limit (0 = none)");
  cmd->add_option("--out", o.out, "Output path (default stdout)");
}

void add_solver_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--solver", o.solver, "Estimator: gnc or closed-form");
  cmd->add_option("--zeta", o.zeta, "GNC truncation threshold (default beta)");
  cmd->add_option("--rho", o.rho, "Normal-to-point weight ratio");
}

void add_experiment_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--problem", o.problem, "rotavg, registration, registration_normals or crossratio");
  cmd->add_option("--n", o.n, "Number of measurements");
  cmd->add_option("--sigma", o.sigma, "Inlier noise standard deviation");
  cmd->add_option("--beta", o.beta, "Inlier noise bound");
  cmd->add_option("--beta-normal", o.beta_normal, "Normal noise bound");
  cmd->add_option("--seed", o.seed, "Base RNG seed");
  cmd->add_option("--out", o.out, "Output path (default stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Outlier pruning with compatibility graphs"};
  app.require_subcommand(1);
  Options o;

  auto* prune_cmd = app.add_subcommand("prune", "Select inliers and print the selection as JSON");
  add_prune_flags(prune_cmd, o);

  auto* rotavg_cmd = app.add_subcommand("rotavg", "Prune and average rotations");
  auto* register_cmd = app.add_subcommand("register", "Prune and register point sets");
  auto* crossratio_cmd = app.add_subcommand("crossratio", "Prune cross-ratio correspondences");
  for (auto* cmd : {rotavg_cmd, register_cmd, crossratio_cmd}) {
    add_prune_flags(cmd, o);
    add_solver_flags(cmd, o);
  }

  auto* graph_cmd = app.add_subcommand("graph", "Print the compatibility graph as an edge list");
  graph_cmd->add_option("input", o.input, "Measurement file (JSON)")->required()->check(CLI::ExistingFile);
  graph_cmd->add_option("--beta", o.beta, "Noise bound, overrides the file");
  graph_cmd->add_option("--beta-normal", o.beta_normal, "Normal noise bound, overrides the file");
  graph_cmd->add_option("--budget", o.budget, "Max subsets tested, or 'unlimited'");
  graph_cmd->add_option("--seed", o.seed, "Seed for subset sampling");
  graph_cmd->add_option("--out", o.out, "Output path (default stdout)");

  auto* generate_cmd = app.add_subcommand("generate", "Write a synthetic measurement file");
  add_experiment_flags(generate_cmd, o);
  generate_cmd->add_option("--outlier-rate", o.outlier_rate, "Outlier fraction in [0, 1)");
  generate_cmd->add_option("--points-file", o.points_file, "Source cloud: x y z [nx ny nz] per line")
      ->check(CLI::ExistingFile);
  generate_cmd->add_option("--all-to-all", o.all_to_all, "Source points for all-to-all correspondences");
  generate_cmd->add_option("--overlap", o.overlap, "Fraction of source points kept in the target");

  auto* bench_cmd = app.add_subcommand("bench", "Monte Carlo sweep over outlier rates");
  add_experiment_flags(bench_cmd, o);
  bench_cmd->add_option("--mode", o.mode, "Inlier selection: clique, kcore or none");
  bench_cmd->add_option("--solver", o.solver, "Estimator: gnc or closed-form");
  bench_cmd->add_option("--runs", o.runs, "Runs per outlier rate");
  bench_cmd->add_option("--outlier-rates", o.outlier_rates, "Comma-separated outlier fractions")
      ->delimiter(',');
  bench_cmd->add_option("--budget", o.budget, "Max subsets tested, or 'unlimited'");
  bench_cmd->add_option("--time-budget-ms", o.time_budget_ms, "Clique search time limit (0 = none)");
  bench_cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
  bench_cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  bench_cmd->add_flag("--no-timing", o.no_timing, "Write zero timings for reproducible output");
  bench_cmd->add_option("--rot-threshold-deg", o.thresholds.rotation_deg, "Success rotation error");
  bench_cmd->add_option("--trans-threshold", o.thresholds.translation, "Success translation error");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*prune_cmd) return cmd_prune(o);
    if (*rotavg_cmd) return cmd_pipeline(o, {ProblemKind::kRotationAveraging}, "rotavg");
    if (*register_cmd) {
      return cmd_pipeline(o, {ProblemKind::kRegistration, ProblemKind::kRegistrationNormals}, "register");
    }
    if (*crossratio_cmd) return cmd_pipeline(o, {ProblemKind::kCrossRatio}, "crossratio");
    if (*graph_cmd) return cmd_graph(o);
    if (*generate_cmd) return cmd_generate(o);
    if (*bench_cmd) return cmd_bench(o);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
