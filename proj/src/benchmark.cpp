#include "gmsr/benchmark.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <filesystem>
#include <ostream>

#include "gmsr/report.hpp"
#include "json.hpp"
#include "parallel.hpp"

namespace gmsr {

namespace fs = std::filesystem;

namespace {

std::vector<fs::path> files_with_extensions(const std::string& dir, std::initializer_list<std::string_view> exts) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw Error(Error::Kind::Io, "not a directory: '" + dir + "'");
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (std::find(exts.begin(), exts.end(), ext) != exts.end()) out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Runs fn over [0, n) in parallel, rethrowing the first failure by index.
template <typename Fn>
void parallel_checked(std::size_t n, Fn&& fn) {
  std::vector<std::exception_ptr> errors(n);
  detail::parallel_for(n, [&](std::size_t i) {
    try {
      fn(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  });
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

std::vector<ModelMesh> load_mesh_directory(const std::string& dir) {
  std::vector<ModelMesh> out;
  for (const auto& path : files_with_extensions(dir, {".off", ".obj"})) {
    out.push_back({path.stem().string(), load_mesh(path.string())});
  }
  return out;
}

std::map<std::string, std::vector<VertexIndex>> load_detection_directory(const std::string& dir) {
  std::map<std::string, std::vector<VertexIndex>> out;
  for (const auto& path : files_with_extensions(dir, {".json"})) {
    out[path.stem().string()] = load_detection_json(path.string()).vertices;
  }
  return out;
}

EvaluationReport evaluate_models(const std::vector<ModelMesh>& meshes,
                                 const std::map<std::string, std::vector<VertexIndex>>& detections,
                                 const GroundTruthLoad& ground_truth, const EvaluationGrid& grid) {
  EvaluationReport report;
  report.warnings = ground_truth.warnings;

  struct Job {
    const ModelMesh* mesh;
    const std::vector<VertexIndex>* detected;
  };
  std::vector<Job> jobs;
  for (const auto& model : ground_truth.set.models()) {
    auto m = std::find_if(meshes.begin(), meshes.end(), [&](const ModelMesh& x) { return x.id == model; });
    auto d = detections.find(model);
    if (m == meshes.end() || d == detections.end()) {
      report.skipped_models.push_back(model);
      report.warnings.push_back(model + ": " + (m == meshes.end() ? "mesh" : "detection file") +
                                " missing; model skipped");
      continue;
    }
    jobs.push_back({&*m, &d->second});
  }

  std::vector<std::vector<CellResult>> cells(jobs.size());
  std::vector<std::vector<std::string>> warnings(jobs.size());
  parallel_checked(jobs.size(), [&](std::size_t i) {
    cells[i] = evaluate_model(jobs[i].mesh->mesh, jobs[i].mesh->id, *jobs[i].detected, ground_truth.set, grid,
                              warnings[i]);
  });
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    report.cells.insert(report.cells.end(), cells[i].begin(), cells[i].end());
    report.warnings.insert(report.warnings.end(), warnings[i].begin(), warnings[i].end());
  }
  report.summary = aggregate(report.cells);
  if (report.summary.monotonicity_violations > 0) {
    report.warnings.push_back(std::to_string(report.summary.monotonicity_violations) +
                              " (model, n, sigma) series lose score as r grows");
  }
  return report;
}

EvaluationReport evaluate_directories(const std::string& detections_dir, const std::string& ground_truth_path,
                                      const std::string& mesh_dir, const EvaluationGrid& grid) {
  const auto meshes = load_mesh_directory(mesh_dir);
  std::vector<std::string> ids;
  for (const auto& m : meshes) ids.push_back(m.id);
  const auto gt = load_ground_truth(ground_truth_path, ids);
  return evaluate_models(meshes, load_detection_directory(detections_dir), gt, grid);
}

std::string evaluation_summary_json(const EvaluationReport& report, const EvaluationGrid& grid) {
  using nlohmann::json;
  auto curve = [](const std::vector<CurvePoint>& points, bool with_n_sigma) {
    json list = json::array();
    for (const auto& p : points) {
      json row{{"r", p.tolerance}, {"iou", p.mean_iou}, {"f1", p.mean_f1}, {"cells", p.cells}};
      if (with_n_sigma) {
        row["n"] = p.subjects;
        row["sigma"] = p.sigma;
      }
      list.push_back(std::move(row));
    }
    return list;
  };
  json doc{{"grid", {{"n", grid.subjects}, {"sigma", grid.sigmas}, {"r", grid.tolerances}}},
           {"average_iou", report.summary.mean_iou},
           {"average_f1", report.summary.mean_f1},
           {"cells", report.summary.cells},
           {"defined_cells", report.summary.defined_cells},
           {"monotonicity_violations", report.summary.monotonicity_violations},
           {"per_r", curve(report.summary.per_tolerance, false)},
           {"per_n_sigma_r", curve(report.summary.per_subjects_sigma, true)},
           {"skipped_models", report.skipped_models},
           {"warnings", report.warnings}};
  return doc.dump(2) + "\n";
}

SweepParameter parse_sweep_parameter(const std::string& name) {
  if (name == "rings" || name == "K") return SweepParameter::Rings;
  if (name == "alpha") return SweepParameter::Alpha;
  if (name == "nms-rings" || name == "N") return SweepParameter::NmsRings;
  if (name == "beta") return SweepParameter::Beta;
  if (name == "distance-weight") return SweepParameter::DistanceWeight;
  throw Error(Error::Kind::InvalidArgument, "unknown sweep parameter '" + name + "'");
}

std::string to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::Rings: return "rings";
    case SweepParameter::Alpha: return "alpha";
    case SweepParameter::NmsRings: return "nms-rings";
    case SweepParameter::Beta: return "beta";
    case SweepParameter::DistanceWeight: return "distance-weight";
  }
  return "?";
}

namespace {
DetectorConfig with_parameter(DetectorConfig config, SweepParameter p, double value) {
  auto as_int = [&] {
    if (value != std::floor(value)) {
      throw Error(Error::Kind::InvalidArgument, to_string(p) + " sweep values must be integers");
    }
    return static_cast<int>(value);
  };
  switch (p) {
    case SweepParameter::Rings: config.rings = as_int(); break;
    case SweepParameter::Alpha: config.alpha = value; break;
    case SweepParameter::NmsRings: config.nms_rings = as_int(); break;
    case SweepParameter::Beta: config.beta = value; break;
    case SweepParameter::DistanceWeight: config.distance_weight = value; break;
  }
  config.validate();
  return config;
}
}  // namespace

std::vector<SweepRow> sweep(const std::vector<ModelMesh>& meshes, const GroundTruthLoad& ground_truth,
                            const EvaluationGrid& grid, const DetectorConfig& base, SweepParameter parameter,
                            const std::vector<double>& values) {
  if (values.empty()) throw Error(Error::Kind::InvalidArgument, "sweep needs at least one value");
  std::vector<SweepRow> rows;
  for (double value : values) {
    const DetectorConfig config = with_parameter(base, parameter, value);
    std::map<std::string, std::vector<VertexIndex>> detections;
    for (const auto& m : meshes) {
      std::vector<VertexIndex> ids;
      for (const auto& p : detect(m.mesh, config).points) ids.push_back(p.vertex);
      detections[m.id] = std::move(ids);
    }
    const auto report = evaluate_models(meshes, detections, ground_truth, grid);
    rows.push_back({value, report.summary.mean_iou, report.summary.mean_f1, report.summary.defined_cells});
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, SweepParameter parameter, const DetectorConfig& base,
                     const std::vector<SweepRow>& rows) {
  out << "# base config: " << config_json(base) << "\n";
  out << to_string(parameter) << ",average_iou,average_f1,cells\n";
  for (const auto& r : rows) {
    out << format_number(r.value) << ',' << format_number(r.mean_iou) << ',' << format_number(r.mean_f1) << ','
        << r.cells << '\n';
  }
}

}  // namespace gmsr
