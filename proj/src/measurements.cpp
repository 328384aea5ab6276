#include "robin/measurements.hpp"

#include <cmath>
#include <stdexcept>

#include "robin/errors.hpp"

namespace robin {

NoiseBound::NoiseBound(double beta) : beta_(beta) {
  if (!std::isfinite(beta) || !(beta > 0.0)) {
    throw std::invalid_argument("noise bound must be finite and positive");
  }
}

ProblemKind problem_kind(const MeasurementSet& set) {
  return static_cast<ProblemKind>(set.index());
}

std::string_view problem_name(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::kRotationAveraging:
      return "rotavg";
    case ProblemKind::kRegistration:
      return "registration";
    case ProblemKind::kRegistrationNormals:
      return "registration_normals";
    case ProblemKind::kCrossRatio:
      return "crossratio";
  }
  return "unknown";
}

ProblemKind parse_problem_name(std::string_view name) {
  for (auto kind : {ProblemKind::kRotationAveraging, ProblemKind::kRegistration,
                    ProblemKind::kRegistrationNormals, ProblemKind::kCrossRatio}) {
    if (problem_name(kind) == name) return kind;
  }
  throw InputError("unknown problem '" + std::string(name) +
                   "' (expected rotavg, registration, registration_normals or crossratio)");
}

std::size_t measurement_count(const MeasurementSet& set) {
  return std::visit(
      [](const auto& s) -> std::size_t {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, RotationSamples>) {
          return s.rotations.size();
        } else if constexpr (std::is_same_v<T, Camera2D3D>) {
          return s.correspondences.size();
        } else {
          return s.pairs.size();
        }
      },
      set);
}

std::size_t invariant_arity(ProblemKind kind) {
  return kind == ProblemKind::kCrossRatio ? 4 : 2;
}

void validate(const MeasurementSet& set) {
  if (measurement_count(set) == 0) throw InputError("measurements: empty measurement set");
  if (const auto* cam = std::get_if<Camera2D3D>(&set)) {
    for (std::size_t i = 0; i < cam->correspondences.size(); ++i) {
      if (!(cam->correspondences[i].p.z() > 0.0)) {
        throw InputError("measurements[" + std::to_string(i) +
                         "].p: point must have positive depth (p_z > 0)");
      }
    }
  }
}

}  // namespace robin
