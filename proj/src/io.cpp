#include "robin/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "robin/errors.hpp"

namespace robin {

namespace {

using nlohmann::json;

std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

const json& field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw InputError(path + ": expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw InputError(path + "." + key + ": missing field");
  return *it;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw InputError(path + ": expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw InputError(path + ": expected a finite number");
  return x;
}

template <int D>
Eigen::Matrix<double, D, 1> vector_of(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != D) {
    throw InputError(path + ": expected an array of " + std::to_string(D) + " numbers");
  }
  Eigen::Matrix<double, D, 1> v;
  for (int k = 0; k < D; ++k) v(k) = number(j[k], at(path, k));
  return v;
}

Rotation rotation_of(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 9) {
    throw InputError(path + ": expected a row-major rotation as 9 numbers");
  }
  Mat3 m;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) m(r, c) = number(j[3 * r + c], at(path, 3 * r + c));
  if ((m.transpose() * m - Mat3::Identity()).norm() > 1e-6 || m.determinant() <= 0.0) {
    throw InputError(path + ": not a rotation matrix (orthonormal with det +1 within 1e-6)");
  }
  if ((m.transpose() * m - Mat3::Identity()).norm() <= Rotation::kTolerance) {
    return Rotation::from_matrix_unchecked(m);
  }
  return project_to_so3(m);
}

UnitVector3 unit_of(const json& j, const std::string& path) {
  const Vec3 v = vector_of<3>(j, path);
  const double norm = v.norm();
  if (std::abs(norm - 1.0) > 1e-6) throw InputError(path + ": expected a unit vector");
  if (std::abs(norm - 1.0) <= UnitVector3::kTolerance) return UnitVector3::from_unit(v);
  return UnitVector3::normalized(v);
}

NoiseBound bound_of(const json& root, const std::string& key, std::optional<double> override) {
  const double beta = override ? *override : number(field(root, key, "input"), key);
  if (!(beta > 0.0)) throw InputError(key + ": noise bound must be positive");
  return NoiseBound(beta);
}

MeasurementSet parse_set(const json& root, ProblemKind kind, const BoundOverrides& ov) {
  const json& list = field(root, "measurements", "input");
  if (!list.is_array()) throw InputError("measurements: expected an array");
  const std::string base = "measurements";
  switch (kind) {
    case ProblemKind::kRotationAveraging: {
      RotationSamples rs{{}, bound_of(root, "beta", ov.beta)};
      for (std::size_t i = 0; i < list.size(); ++i) rs.rotations.push_back(rotation_of(list[i], at(base, i)));
      return rs;
    }
    case ProblemKind::kRegistration: {
      PointPairs pp{{}, bound_of(root, "beta", ov.beta)};
      for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string p = at(base, i);
        pp.pairs.push_back({vector_of<3>(field(list[i], "a", p), p + ".a"),
                            vector_of<3>(field(list[i], "b", p), p + ".b")});
      }
      return pp;
    }
    case ProblemKind::kRegistrationNormals: {
      const NoiseBound beta = bound_of(root, "beta", ov.beta);
      PointNormalPairs pn{{}, beta, bound_of(root, "beta_normal", ov.beta_normal)};
      for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string p = at(base, i);
        pn.pairs.push_back({vector_of<3>(field(list[i], "a", p), p + ".a"),
                            unit_of(field(list[i], "ma", p), p + ".ma"),
                            vector_of<3>(field(list[i], "b", p), p + ".b"),
                            unit_of(field(list[i], "nb", p), p + ".nb")});
      }
      return pn;
    }
    case ProblemKind::kCrossRatio: {
      Camera2D3D cam{{}, bound_of(root, "beta", ov.beta)};
      for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string p = at(base, i);
        cam.correspondences.push_back({vector_of<3>(field(list[i], "p", p), p + ".p"),
                                       vector_of<2>(field(list[i], "y", p), p + ".y")});
      }
      return cam;
    }
  }
  throw std::logic_error("unknown problem kind");
}

json array_of(const Eigen::Ref<const Eigen::VectorXd>& v) {
  json out = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(v(k));
  return out;
}

json rotation_json(const Rotation& r) {
  json out = json::array();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out.push_back(r.matrix()(i, j));
  return out;
}

json number_or_null(double x) { return std::isnan(x) ? json(nullptr) : json(x); }

json metrics_json(const RunMetrics& m) {
  return json{{"rotation_error_deg", number_or_null(m.rotation_error_deg)},
              {"translation_error", number_or_null(m.translation_error)},
              {"inliers_preserved_pct", m.inliers_preserved_pct},
              {"outliers_rejected_pct", m.outliers_rejected_pct},
              {"inlier_rate_pct", m.inlier_rate_in_selection_pct},
              {"selection_size", m.selection_size}};
}

json selection_json(std::size_t n, const PruneResult& prune) {
  json j{{"n_measurements", n},
         {"mode", std::string(mode_name(prune.selection.mode))},
         {"exact", prune.selection.exact},
         {"graph_sampled", prune.graph_sampled},
         {"edge_count", prune.edge_count},
         {"selected", prune.selection.vertices}};
  j["clique_number"] = prune.selection.clique_number ? json(*prune.selection.clique_number) : json(nullptr);
  return j;
}

std::ifstream open_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open file");
  return in;
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

Dataset read_measurements(std::istream& in, const BoundOverrides& overrides) {
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw InputError("input: expected a JSON object");
  const json& name = field(root, "problem", "input");
  if (!name.is_string()) throw InputError("problem: expected a string");
  const ProblemKind kind = parse_problem_name(name.get<std::string>());

  Dataset data{parse_set(root, kind, overrides), {}, std::nullopt, std::nullopt};
  validate(data.measurements);
  const std::size_t n = measurement_count(data.measurements);

  if (const auto it = root.find("inliers"); it != root.end()) {
    if (!it->is_array() || it->size() != n) {
      throw InputError("inliers: expected an array of " + std::to_string(n) + " booleans");
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!(*it)[i].is_boolean()) throw InputError(at("inliers", i) + ": expected a boolean");
      data.inliers.push_back((*it)[i].get<bool>());
    }
  }
  if (const auto it = root.find("ground_truth"); it != root.end()) {
    if (!it->is_object()) throw InputError("ground_truth: expected an object");
    if (it->contains("rotation")) data.rotation = rotation_of((*it)["rotation"], "ground_truth.rotation");
    if (it->contains("translation")) {
      data.translation = vector_of<3>((*it)["translation"], "ground_truth.translation");
    }
  }
  return data;
}

Dataset read_measurements_file(const std::string& path, const BoundOverrides& overrides) {
  std::ifstream in = open_file(path);
  try {
    return read_measurements(in, overrides);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

void write_measurements(std::ostream& out, const Dataset& data) {
  const ProblemKind kind = problem_kind(data.measurements);
  json root{{"problem", std::string(problem_name(kind))}};
  json list = json::array();
  std::visit(
      [&](const auto& set) {
        using T = std::decay_t<decltype(set)>;
        if constexpr (std::is_same_v<T, RotationSamples>) {
          root["beta"] = set.bound.value();
          for (const auto& r : set.rotations) list.push_back(rotation_json(r));
        } else if constexpr (std::is_same_v<T, PointPairs>) {
          root["beta"] = set.bound.value();
          for (const auto& p : set.pairs) list.push_back({{"a", array_of(p.a)}, {"b", array_of(p.b)}});
        } else if constexpr (std::is_same_v<T, PointNormalPairs>) {
          root["beta"] = set.point_bound.value();
          root["beta_normal"] = set.normal_bound.value();
          for (const auto& p : set.pairs) {
            list.push_back({{"a", array_of(p.a)},
                            {"ma", array_of(p.ma.vec())},
                            {"b", array_of(p.b)},
                            {"nb", array_of(p.nb.vec())}});
          }
        } else {
          root["beta"] = set.bound.value();
          for (const auto& c : set.correspondences) {
            list.push_back({{"p", array_of(c.p)}, {"y", array_of(c.y)}});
          }
        }
      },
      data.measurements);
  root["measurements"] = std::move(list);
  if (!data.inliers.empty()) {
    json mask = json::array();
    for (bool b : data.inliers) mask.push_back(b);
    root["inliers"] = std::move(mask);
  }
  if (data.rotation || data.translation) {
    json gt = json::object();
    if (data.rotation) gt["rotation"] = rotation_json(*data.rotation);
    if (data.translation) gt["translation"] = array_of(*data.translation);
    root["ground_truth"] = std::move(gt);
  }
  out << root.dump() << '\n';
}

PointCloud read_points(std::istream& in) {
  PointCloud cloud;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ss(line);
    std::vector<double> values;
    std::string token;
    while (ss >> token) {
      double x;
      const auto res = std::from_chars(token.data(), token.data() + token.size(), x);
      if (res.ec != std::errc() || res.ptr != token.data() + token.size() || !std::isfinite(x)) {
        throw InputError("line " + std::to_string(line_no) + ": '" + token + "' is not a number");
      }
      values.push_back(x);
    }
    if (values.empty()) continue;
    if (values.size() != 3 && values.size() != 6) {
      throw InputError("line " + std::to_string(line_no) + ": expected 'x y z' or 'x y z nx ny nz'");
    }
    const bool has_normal = values.size() == 6;
    if (!cloud.points.empty() && has_normal != !cloud.normals.empty()) {
      throw InputError("line " + std::to_string(line_no) +
                       ": normals must be given on every line or on none");
    }
    cloud.points.emplace_back(values[0], values[1], values[2]);
    if (has_normal) {
      const Vec3 n(values[3], values[4], values[5]);
      if (n.norm() < 1e-12) throw InputError("line " + std::to_string(line_no) + ": zero normal");
      cloud.normals.push_back(n.normalized());
    }
  }
  if (cloud.points.empty()) throw InputError("points file contains no points");
  return cloud;
}

PointCloud read_points_file(const std::string& path) {
  std::ifstream in = open_file(path);
  try {
    return read_points(in);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

void write_selection_json(std::ostream& out, ProblemKind problem, std::size_t n_measurements,
                          const PruneResult& prune) {
  json j = selection_json(n_measurements, prune);
  j["problem"] = std::string(problem_name(problem));
  out << j.dump(2) << '\n';
}

void write_pipeline_json(std::ostream& out, ProblemKind problem, std::size_t n_measurements,
                         const PipelineResult& result, const std::optional<RunMetrics>& metrics) {
  json j{{"problem", std::string(problem_name(problem))},
         {"selection", selection_json(n_measurements, result.prune)}};
  json est = json::object();
  if (result.estimate.rotation) est["rotation"] = rotation_json(*result.estimate.rotation);
  if (result.estimate.translation) est["translation"] = array_of(*result.estimate.translation);
  if (result.estimate.weights) {
    est["gnc_iterations"] = result.estimate.iterations;
    est["gnc_converged"] = result.estimate.converged;
  }
  j["estimate"] = std::move(est);
  if (result.solve_error) j["solve_error"] = *result.solve_error;
  if (metrics) j["metrics"] = metrics_json(*metrics);
  out << j.dump(2) << '\n';
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows, bool include_timing) {
  out << "problem,mode,solver,outlier_rate,seed,rot_err_deg,trans_err,inliers_preserved_pct,"
         "outliers_rejected_pct,inlier_rate_pct,prune_ms,solve_ms,success\n";
  for (const auto& r : rows) {
    const RunMetrics& m = r.metrics;
    out << problem_name(r.problem) << ',' << mode_name(r.mode) << ',' << solver_name(r.solver) << ','
        << format_number(r.outlier_rate) << ',' << r.seed << ',' << format_number(m.rotation_error_deg)
        << ',' << format_number(m.translation_error) << ',' << format_number(m.inliers_preserved_pct)
        << ',' << format_number(m.outliers_rejected_pct) << ','
        << format_number(m.inlier_rate_in_selection_pct) << ','
        << format_number(include_timing ? m.prune_time_ms : 0.0) << ','
        << format_number(include_timing ? m.solve_time_ms : 0.0) << ',' << (r.success ? 1 : 0)
        << '\n';
  }
}

void write_bench_json(std::ostream& out, const std::vector<BenchRow>& rows, bool include_timing) {
  json list = json::array();
  for (const auto& r : rows) {
    json j = metrics_json(r.metrics);
    j["problem"] = std::string(problem_name(r.problem));
    j["mode"] = std::string(mode_name(r.mode));
    j["solver"] = std::string(solver_name(r.solver));
    j["outlier_rate"] = r.outlier_rate;
    j["seed"] = r.seed;
    j["prune_ms"] = include_timing ? r.metrics.prune_time_ms : 0.0;
    j["solve_ms"] = include_timing ? r.metrics.solve_time_ms : 0.0;
    j["success"] = r.success;
    list.push_back(std::move(j));
  }
  out << list.dump(2) << '\n';
}

}  // namespace robin
