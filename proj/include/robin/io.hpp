#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "robin/datasets.hpp"
#include "robin/metrics.hpp"
#include "robin/pipeline.hpp"

namespace robin {

/// Noise bounds given on the command line take precedence over the file.
struct BoundOverrides {
  std::optional<double> beta;
  std::optional<double> beta_normal;
};

/// Reads a measurement file:
///   {"problem": "rotavg" | "registration" | "registration_normals" | "crossratio",
///    "beta": b, "beta_normal": bn, "measurements": [...],
///    "inliers": [true, false, ...], "ground_truth": {"rotation": [9], "translation": [3]}}
/// Rotations are row-major 9-tuples, point pairs {"a", "b"}, point-normal
/// pairs add "ma" and "nb", 2D-3D records are {"p", "y"}. "inliers" and
/// "ground_truth" are optional. Throws InputError naming the offending field.
Dataset read_measurements(std::istream& in, const BoundOverrides& overrides = {});
Dataset read_measurements_file(const std::string& path, const BoundOverrides& overrides = {});

void write_measurements(std::ostream& out, const Dataset& data);

/// Whitespace-separated "x y z" or "x y z nx ny nz" per line; '#' starts a
/// comment. Throws InputError naming the line.
PointCloud read_points(std::istream& in);
PointCloud read_points_file(const std::string& path);

void write_selection_json(std::ostream& out, ProblemKind problem, std::size_t n_measurements,
                          const PruneResult& prune);

void write_pipeline_json(std::ostream& out, ProblemKind problem, std::size_t n_measurements,
                         const PipelineResult& result, const std::optional<RunMetrics>& metrics);

/// Timing columns are written as 0 when include_timing is false, which makes
/// the output a pure function of the inputs.
void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows, bool include_timing);
void write_bench_json(std::ostream& out, const std::vector<BenchRow>& rows, bool include_timing);

/// Shortest decimal that round-trips; "nan" for NaN.
std::string format_number(double x);

}  // namespace robin
