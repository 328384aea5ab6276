#include "robin/metrics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace robin {

RunMetrics evaluate(const Dataset& data, std::span<const std::size_t> selection,
                    const EstimateView& estimate, double prune_ms, double solve_ms) {
  const std::size_t n = measurement_count(data.measurements);
  if (data.inliers.size() != n) throw std::invalid_argument("evaluate: inlier mask is missing");

  std::size_t planted_in = 0;
  for (bool b : data.inliers) planted_in += b ? 1 : 0;
  const std::size_t planted_out = n - planted_in;

  std::vector<bool> chosen(n, false);
  for (auto i : selection) {
    if (i >= n) throw std::invalid_argument("evaluate: selection index out of range");
    chosen[i] = true;
  }
  std::size_t kept_in = 0, kept_out = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!chosen[i]) continue;
    (data.inliers[i] ? kept_in : kept_out) += 1;
  }
  const std::size_t selected = kept_in + kept_out;

  RunMetrics m;
  m.selection_size = selected;
  m.inliers_preserved_pct = planted_in == 0 ? 100.0 : 100.0 * kept_in / planted_in;
  m.outliers_rejected_pct =
      planted_out == 0 ? 100.0 : 100.0 * (planted_out - kept_out) / planted_out;
  m.inlier_rate_in_selection_pct = selected == 0 ? 0.0 : 100.0 * kept_in / selected;
  if (estimate.rotation && data.rotation) {
    m.rotation_error_deg = geodesic_distance(*estimate.rotation, *data.rotation) * 180.0 / std::numbers::pi;
  }
  if (estimate.translation && data.translation) {
    m.translation_error = (*estimate.translation - *data.translation).norm();
  }
  m.prune_time_ms = prune_ms;
  m.solve_time_ms = solve_ms;
  return m;
}

bool is_success(ProblemKind problem, const RunMetrics& m, const SuccessThresholds& thresholds) {
  if (problem == ProblemKind::kCrossRatio) {
    return m.selection_size > 0 && m.inlier_rate_in_selection_pct == 100.0;
  }
  if (!(m.rotation_error_deg <= thresholds.rotation_deg)) return false;
  if (problem == ProblemKind::kRotationAveraging) return true;
  return m.translation_error <= thresholds.translation;
}

}  // namespace robin
