#include "gmsr/gmsr.h"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include "gmsr/benchmark.hpp"
#include "gmsr/detector.hpp"
#include "gmsr/eval.hpp"
#include "gmsr/report.hpp"

struct gmsr_mesh {
  gmsr::Mesh mesh;
};

struct gmsr_detection {
  gmsr::Mesh mesh;
  gmsr::DetectorConfig config;
  gmsr::Detection result;
};

struct gmsr_report {
  gmsr::EvaluationReport report;
  gmsr::EvaluationGrid grid;
};

namespace {

thread_local std::string last_error;

gmsr_status fail(gmsr_status status, const std::string& msg) {
  last_error = msg;
  return status;
}

gmsr_status status_of(gmsr::Error::Kind kind) {
  switch (kind) {
    case gmsr::Error::Kind::InvalidArgument: return GMSR_ERR_INVALID_ARGUMENT;
    case gmsr::Error::Kind::Io: return GMSR_ERR_IO;
    case gmsr::Error::Kind::Parse: return GMSR_ERR_PARSE;
    case gmsr::Error::Kind::Data: return GMSR_ERR_DATA;
  }
  return GMSR_ERR_INTERNAL;
}

// Runs fn, translating exceptions into status codes.
template <typename Fn>
gmsr_status guarded(Fn&& fn) {
  try {
    fn();
    return GMSR_OK;
  } catch (const gmsr::Error& e) {
    return fail(status_of(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(GMSR_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(GMSR_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(GMSR_ERR_INTERNAL, "unknown error");
  }
}

gmsr::DetectorConfig to_config(const gmsr_config* c) {
  gmsr::DetectorConfig config;
  if (!c) return config;
  if (c->scale_count > GMSR_MAX_SCALES) {
    throw gmsr::Error(gmsr::Error::Kind::InvalidArgument, "too many scales");
  }
  config.rings = c->rings;
  config.alpha = c->alpha;
  config.nms_rings = c->nms_rings;
  config.beta = c->beta;
  config.scales.assign(c->scales, c->scales + c->scale_count);
  config.distance_weight = c->distance_weight;
  config.validate();
  return config;
}

gmsr::EvaluationGrid to_grid(const gmsr_grid* g) {
  if (!g) return gmsr::EvaluationGrid::dataset_a();
  if ((g->subject_count && !g->subjects) || (g->sigma_count && !g->sigmas) ||
      (g->tolerance_count && !g->tolerances)) {
    throw gmsr::Error(gmsr::Error::Kind::InvalidArgument, "grid arrays must be non-null when counts are non-zero");
  }
  gmsr::EvaluationGrid grid;
  grid.subjects.assign(g->subjects, g->subjects + g->subject_count);
  grid.sigmas.assign(g->sigmas, g->sigmas + g->sigma_count);
  grid.tolerances.assign(g->tolerances, g->tolerances + g->tolerance_count);
  if (grid.subjects.empty() || grid.sigmas.empty() || grid.tolerances.empty()) {
    throw gmsr::Error(gmsr::Error::Kind::InvalidArgument, "evaluation grid must be non-empty");
  }
  for (double r : grid.tolerances) {
    if (!(r >= 0)) throw gmsr::Error(gmsr::Error::Kind::InvalidArgument, "tolerances must be >= 0");
  }
  return grid;
}

size_t copy_points(const std::vector<gmsr::Candidate>& src, gmsr_point* out, size_t capacity) {
  if (!out) return 0;
  const size_t n = std::min(capacity, src.size());
  for (size_t i = 0; i < n; ++i) out[i] = {src[i].vertex, src[i].rho};
  return n;
}

gmsr::MatchResult to_match(const gmsr_match& m) {
  gmsr::MatchResult r;
  r.true_positives = m.true_positives;
  r.false_positives = m.false_positives;
  r.false_negatives = m.false_negatives;
  r.ground_truth_count = m.ground_truth_count;
  r.detected_count = m.detected_count;
  r.tolerance = m.tolerance;
  return r;
}

#define GMSR_REQUIRE(cond, what) \
  if (!(cond)) return fail(GMSR_ERR_INVALID_ARGUMENT, what)

}  // namespace

extern "C" {

const char* gmsr_version(void) { return "1.0.0"; }

const char* gmsr_last_error(void) { return last_error.c_str(); }

void gmsr_config_default(gmsr_config* config) {
  if (!config) return;
  const gmsr::DetectorConfig d;
  std::memset(config, 0, sizeof *config);
  config->rings = d.rings;
  config->alpha = d.alpha;
  config->nms_rings = d.nms_rings;
  config->beta = d.beta;
  config->scale_count = d.scales.size();
  std::copy(d.scales.begin(), d.scales.end(), config->scales);
  config->distance_weight = d.distance_weight;
}

gmsr_status gmsr_mesh_load(const char* path, gmsr_mesh** out) {
  GMSR_REQUIRE(path && out, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new gmsr_mesh{gmsr::load_mesh(path)}; });
}

gmsr_status gmsr_mesh_parse(const char* text, const char* format, gmsr_mesh** out) {
  GMSR_REQUIRE(text && format && out, "null argument");
  *out = nullptr;
  const std::string fmt = format;
  return guarded([&] {
    if (fmt == "off") {
      *out = new gmsr_mesh{gmsr::parse_off(std::string_view(text))};
    } else if (fmt == "obj") {
      *out = new gmsr_mesh{gmsr::parse_obj(std::string_view(text))};
    } else {
      throw gmsr::Error(gmsr::Error::Kind::InvalidArgument, "format must be \"off\" or \"obj\"");
    }
  });
}

gmsr_status gmsr_mesh_from_arrays(const double* xyz, size_t vertex_count, const uint32_t* triangles,
                                  size_t face_count, gmsr_mesh** out) {
  GMSR_REQUIRE(out, "null argument");
  GMSR_REQUIRE(xyz || vertex_count == 0, "null vertex array");
  GMSR_REQUIRE(triangles || face_count == 0, "null face array");
  *out = nullptr;
  return guarded([&] {
    std::vector<gmsr::Vec3> v(vertex_count);
    for (size_t i = 0; i < vertex_count; ++i) v[i] = {xyz[3 * i], xyz[3 * i + 1], xyz[3 * i + 2]};
    std::vector<gmsr::Triangle> f(face_count);
    for (size_t i = 0; i < face_count; ++i) f[i] = {triangles[3 * i], triangles[3 * i + 1], triangles[3 * i + 2]};
    *out = new gmsr_mesh{gmsr::Mesh(std::move(v), std::move(f))};
  });
}

size_t gmsr_mesh_vertex_count(const gmsr_mesh* mesh) { return mesh ? mesh->mesh.vertex_count() : 0; }
size_t gmsr_mesh_face_count(const gmsr_mesh* mesh) { return mesh ? mesh->mesh.face_count() : 0; }

gmsr_status gmsr_mesh_bbox_diagonal(const gmsr_mesh* mesh, double* out) {
  GMSR_REQUIRE(mesh && out, "null argument");
  return guarded([&] { *out = gmsr::bbox_diagonal(mesh->mesh); });
}

size_t gmsr_mesh_inconsistent_windings(const gmsr_mesh* mesh) {
  return mesh ? gmsr::count_inconsistent_windings(mesh->mesh) : 0;
}

void gmsr_mesh_free(gmsr_mesh* mesh) { delete mesh; }

gmsr_status gmsr_detect(const gmsr_mesh* mesh, const gmsr_config* config, gmsr_detection** out) {
  GMSR_REQUIRE(mesh && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto cfg = to_config(config);
    auto result = gmsr::detect(mesh->mesh, cfg);
    *out = new gmsr_detection{mesh->mesh, std::move(cfg), std::move(result)};
  });
}

size_t gmsr_detection_point_count(const gmsr_detection* det) { return det ? det->result.points.size() : 0; }
size_t gmsr_detection_candidate_count(const gmsr_detection* det) { return det ? det->result.candidates.size() : 0; }

size_t gmsr_detection_points(const gmsr_detection* det, gmsr_point* out, size_t capacity) {
  return det ? copy_points(det->result.points, out, capacity) : 0;
}

size_t gmsr_detection_candidates(const gmsr_detection* det, gmsr_point* out, size_t capacity) {
  return det ? copy_points(det->result.candidates, out, capacity) : 0;
}

gmsr_status gmsr_detection_response(const gmsr_detection* det, double* out, size_t capacity) {
  GMSR_REQUIRE(det && out, "null argument");
  GMSR_REQUIRE(capacity >= det->result.rho.size(), "output buffer smaller than vertex count");
  std::copy(det->result.rho.begin(), det->result.rho.end(), out);
  return GMSR_OK;
}

double gmsr_detection_base_scale(const gmsr_detection* det) { return det ? det->result.base_scale : 0.0; }

void gmsr_detection_free(gmsr_detection* det) { delete det; }

gmsr_status gmsr_detection_write_json(const gmsr_detection* det, const char* model_id, const char* path) {
  GMSR_REQUIRE(det && model_id && path, "null argument");
  return guarded([&] {
    gmsr::write_text_file(path, gmsr::detection_json(model_id, det->config, det->mesh, det->result));
  });
}

gmsr_status gmsr_detection_write_saliency(const gmsr_detection* det, const char* model_id, const char* ply_path,
                                          const char* sidecar_path) {
  GMSR_REQUIRE(det && model_id && ply_path, "null argument");
  return guarded([&] {
    std::ostringstream ply;
    gmsr::write_saliency_ply(ply, det->mesh, det->result.rho);
    gmsr::write_text_file(ply_path, ply.str());
    if (sidecar_path) {
      gmsr::write_text_file(sidecar_path, gmsr::saliency_sidecar_json(model_id, det->config, det->result));
    }
  });
}

gmsr_status gmsr_match_points(const gmsr_mesh* mesh, const uint32_t* ground_truth, size_t gt_count,
                              const uint32_t* detected, size_t detected_count, double tolerance, gmsr_match* out) {
  GMSR_REQUIRE(mesh && out, "null argument");
  GMSR_REQUIRE(ground_truth || gt_count == 0, "null ground-truth array");
  GMSR_REQUIRE(detected || detected_count == 0, "null detection array");
  return guarded([&] {
    const auto m = gmsr::match_points(mesh->mesh, {ground_truth, gt_count}, {detected, detected_count}, tolerance);
    *out = {m.true_positives, m.false_positives, m.false_negatives, m.ground_truth_count, m.detected_count,
            m.tolerance};
  });
}

gmsr_status gmsr_iou(const gmsr_match* match, double* out) {
  GMSR_REQUIRE(match && out, "null argument");
  const auto v = gmsr::iou(to_match(*match));
  if (!v) return fail(GMSR_ERR_UNDEFINED, "IOU undefined: TP + FP + FN == 0");
  *out = *v;
  return GMSR_OK;
}

gmsr_status gmsr_f1(const gmsr_match* match, double* out) {
  GMSR_REQUIRE(match && out, "null argument");
  const auto v = gmsr::f1(to_match(*match));
  if (!v) return fail(GMSR_ERR_UNDEFINED, "F1 undefined: TP + FP + FN == 0");
  *out = *v;
  return GMSR_OK;
}

gmsr_status gmsr_geodesic_distances(const gmsr_mesh* mesh, uint32_t source, double* out, size_t capacity) {
  GMSR_REQUIRE(mesh && out, "null argument");
  GMSR_REQUIRE(capacity >= mesh->mesh.vertex_count(), "output buffer smaller than vertex count");
  return guarded([&] {
    const auto d = gmsr::geodesic_distances(mesh->mesh, source);
    std::copy(d.begin(), d.end(), out);
  });
}

gmsr_status gmsr_evaluate(const char* detections_dir, const char* ground_truth_path, const char* mesh_dir,
                          const gmsr_grid* grid, gmsr_report** out) {
  GMSR_REQUIRE(detections_dir && ground_truth_path && mesh_dir && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto g = to_grid(grid);
    auto report = gmsr::evaluate_directories(detections_dir, ground_truth_path, mesh_dir, g);
    *out = new gmsr_report{std::move(report), std::move(g)};
  });
}

void gmsr_report_summary(const gmsr_report* report, gmsr_summary* out) {
  if (!report || !out) return;
  const auto& r = report->report;
  *out = {r.summary.mean_iou,       r.summary.mean_f1,   r.summary.cells,
          r.summary.defined_cells,  r.skipped_models.size(), r.warnings.size(),
          r.summary.monotonicity_violations};
}

size_t gmsr_report_warning_count(const gmsr_report* report) { return report ? report->report.warnings.size() : 0; }

const char* gmsr_report_warning(const gmsr_report* report, size_t index) {
  if (!report || index >= report->report.warnings.size()) return nullptr;
  return report->report.warnings[index].c_str();
}

gmsr_status gmsr_report_write_csv(const gmsr_report* report, const char* path) {
  GMSR_REQUIRE(report && path, "null argument");
  return guarded([&] {
    std::ostringstream csv;
    gmsr::write_cells_csv(csv, report->report.cells);
    gmsr::write_text_file(path, csv.str());
  });
}

gmsr_status gmsr_report_write_summary(const gmsr_report* report, const char* path) {
  GMSR_REQUIRE(report && path, "null argument");
  return guarded([&] { gmsr::write_text_file(path, gmsr::evaluation_summary_json(report->report, report->grid)); });
}

void gmsr_report_free(gmsr_report* report) { delete report; }

gmsr_status gmsr_sweep(const char* mesh_dir, const char* ground_truth_path, const gmsr_grid* grid,
                       const gmsr_config* base, const char* parameter, const double* values, size_t value_count,
                       const char* csv_path) {
  GMSR_REQUIRE(mesh_dir && ground_truth_path && parameter && csv_path, "null argument");
  GMSR_REQUIRE(values && value_count > 0, "sweep needs at least one value");
  return guarded([&] {
    const auto g = to_grid(grid);
    const auto config = to_config(base);
    const auto param = gmsr::parse_sweep_parameter(parameter);
    const auto meshes = gmsr::load_mesh_directory(mesh_dir);
    std::vector<std::string> ids;
    for (const auto& m : meshes) ids.push_back(m.id);
    const auto gt = gmsr::load_ground_truth(ground_truth_path, ids);
    const auto rows = gmsr::sweep(meshes, gt, g, config, param, {values, values + value_count});
    std::ostringstream csv;
    gmsr::write_sweep_csv(csv, param, config, rows);
    gmsr::write_text_file(csv_path, csv.str());
  });
}

}  // extern "C"
