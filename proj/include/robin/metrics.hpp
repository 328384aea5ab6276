#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "robin/datasets.hpp"
#include "robin/geometry.hpp"

namespace robin {

/// Per-run evaluation. Errors are NaN when the estimate or the ground truth
/// is missing. Percentages are 100 when the corresponding planted set is empty.
struct RunMetrics {
  double rotation_error_deg = std::numeric_limits<double>::quiet_NaN();
  double translation_error = std::numeric_limits<double>::quiet_NaN();
  double inliers_preserved_pct = 0.0;
  double outliers_rejected_pct = 0.0;
  double inlier_rate_in_selection_pct = 0.0;
  double prune_time_ms = 0.0;
  double solve_time_ms = 0.0;
  std::size_t selection_size = 0;
};

/// What a pipeline run produced; absent fields were not estimated.
struct EstimateView {
  std::optional<Rotation> rotation;
  std::optional<Vec3> translation;
};

/// Compares a selection and an estimate with the dataset's ground truth.
/// Requires the dataset's inlier mask.
RunMetrics evaluate(const Dataset& data, std::span<const std::size_t> selection,
                    const EstimateView& estimate, double prune_ms = 0.0, double solve_ms = 0.0);

struct SuccessThresholds {
  double rotation_deg = 15.0;
  double translation = 0.30;
};

/// Rotation and translation errors within the thresholds (translation only
/// when ground truth has one). Cross-ratio runs have no estimate: success
/// means a nonempty selection made only of inliers.
bool is_success(ProblemKind problem, const RunMetrics& m, const SuccessThresholds& thresholds);

}  // namespace robin
