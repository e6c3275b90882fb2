/*
 * gmsr.h - C interface to the mesh interest point detector.
 *
 * All objects are opaque handles created and destroyed through this API.
 * Functions return a gmsr_status; on failure a description of the most
 * recent error on the calling thread is available from gmsr_last_error().
 */
#ifndef GMSR_H
#define GMSR_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define GMSR_API __declspec(dllexport)
#else
#define GMSR_API __attribute__((visibility("default")))
#endif

typedef enum gmsr_status {
  GMSR_OK = 0,
  GMSR_ERR_INVALID_ARGUMENT = 1,
  GMSR_ERR_IO = 2,
  GMSR_ERR_PARSE = 3,
  GMSR_ERR_DATA = 4,
  GMSR_ERR_UNDEFINED = 5, /* score undefined: TP + FP + FN == 0 */
  GMSR_ERR_INTERNAL = 6
} gmsr_status;

typedef struct gmsr_mesh gmsr_mesh;
typedef struct gmsr_detection gmsr_detection;
typedef struct gmsr_report gmsr_report;

#define GMSR_MAX_SCALES 16

typedef struct gmsr_config {
  int rings;              /* K, default 6 */
  double alpha;           /* angle weight, default 2.5 */
  int nms_rings;          /* N, default 10 */
  double beta;            /* l0 penalty, default 0.03 */
  int scales[GMSR_MAX_SCALES]; /* scale multipliers, default {1, 3, 5} */
  size_t scale_count;
  double distance_weight; /* 1 for the detector, 0 for angle-only */
} gmsr_config;

typedef struct gmsr_point {
  uint32_t vertex;
  double rho;
} gmsr_point;

typedef struct gmsr_match {
  size_t true_positives;
  size_t false_positives;
  size_t false_negatives;
  size_t ground_truth_count;
  size_t detected_count;
  double tolerance;
} gmsr_match;

typedef struct gmsr_grid {
  const int* subjects; /* n values */
  size_t subject_count;
  const double* sigmas;
  size_t sigma_count;
  const double* tolerances; /* r values, unit-diagonal lengths */
  size_t tolerance_count;
} gmsr_grid;

typedef struct gmsr_summary {
  double average_iou;
  double average_f1;
  size_t cells;
  size_t defined_cells;
  size_t skipped_models;
  size_t warnings;
  size_t monotonicity_violations;
} gmsr_summary;

GMSR_API const char* gmsr_version(void);
/* Thread-local; valid until the next failing call on this thread. */
GMSR_API const char* gmsr_last_error(void);

GMSR_API void gmsr_config_default(gmsr_config* config);

/* Meshes. Paths ending in .off or .obj (case-insensitive). */
GMSR_API gmsr_status gmsr_mesh_load(const char* path, gmsr_mesh** out);
GMSR_API gmsr_status gmsr_mesh_parse(const char* text, const char* format, gmsr_mesh** out);
GMSR_API gmsr_status gmsr_mesh_from_arrays(const double* xyz, size_t vertex_count, const uint32_t* triangles,
                                           size_t face_count, gmsr_mesh** out);
GMSR_API size_t gmsr_mesh_vertex_count(const gmsr_mesh* mesh);
GMSR_API size_t gmsr_mesh_face_count(const gmsr_mesh* mesh);
GMSR_API gmsr_status gmsr_mesh_bbox_diagonal(const gmsr_mesh* mesh, double* out);
/* Number of shared edges with disagreeing face orientation. */
GMSR_API size_t gmsr_mesh_inconsistent_windings(const gmsr_mesh* mesh);
GMSR_API void gmsr_mesh_free(gmsr_mesh* mesh);

/* Detection. */
/* A NULL config selects the defaults. */
GMSR_API gmsr_status gmsr_detect(const gmsr_mesh* mesh, const gmsr_config* config, gmsr_detection** out);
GMSR_API size_t gmsr_detection_point_count(const gmsr_detection* det);
GMSR_API size_t gmsr_detection_candidate_count(const gmsr_detection* det);
/* Copy up to `capacity` entries; returns the number written. */
GMSR_API size_t gmsr_detection_points(const gmsr_detection* det, gmsr_point* out, size_t capacity);
GMSR_API size_t gmsr_detection_candidates(const gmsr_detection* det, gmsr_point* out, size_t capacity);
/* Final per-vertex response; `out` must hold vertex_count doubles. */
GMSR_API gmsr_status gmsr_detection_response(const gmsr_detection* det, double* out, size_t capacity);
GMSR_API double gmsr_detection_base_scale(const gmsr_detection* det);
GMSR_API void gmsr_detection_free(gmsr_detection* det);

/* Detection JSON (model id, config echo, points). */
GMSR_API gmsr_status gmsr_detection_write_json(const gmsr_detection* det, const char* model_id, const char* path);
/* ASCII PLY coloured by the normalised response, plus a JSON sidecar with
   candidates and final points. */
GMSR_API gmsr_status gmsr_detection_write_saliency(const gmsr_detection* det, const char* model_id,
                                                   const char* ply_path, const char* sidecar_path);

/* Evaluation primitives. */
GMSR_API gmsr_status gmsr_match_points(const gmsr_mesh* mesh, const uint32_t* ground_truth, size_t gt_count,
                                       const uint32_t* detected, size_t detected_count, double tolerance,
                                       gmsr_match* out);
GMSR_API gmsr_status gmsr_iou(const gmsr_match* match, double* out);
GMSR_API gmsr_status gmsr_f1(const gmsr_match* match, double* out);
/* Edge-graph geodesic distances from `source`; out must hold vertex_count doubles. */
GMSR_API gmsr_status gmsr_geodesic_distances(const gmsr_mesh* mesh, uint32_t source, double* out, size_t capacity);

/* Benchmark evaluation over directories: detections/<model>.json, meshes/<model>.off|obj. */
GMSR_API gmsr_status gmsr_evaluate(const char* detections_dir, const char* ground_truth_path, const char* mesh_dir,
                                   const gmsr_grid* grid, gmsr_report** out);
GMSR_API void gmsr_report_summary(const gmsr_report* report, gmsr_summary* out);
GMSR_API size_t gmsr_report_warning_count(const gmsr_report* report);
GMSR_API const char* gmsr_report_warning(const gmsr_report* report, size_t index);
GMSR_API gmsr_status gmsr_report_write_csv(const gmsr_report* report, const char* path);
GMSR_API gmsr_status gmsr_report_write_summary(const gmsr_report* report, const char* path);
GMSR_API void gmsr_report_free(gmsr_report* report);

/* Parameter sweep: parameter is one of "rings", "alpha", "nms-rings", "beta",
   "distance-weight". Writes a CSV of (value, average IOU, average F1). */
GMSR_API gmsr_status gmsr_sweep(const char* mesh_dir, const char* ground_truth_path, const gmsr_grid* grid,
                                const gmsr_config* base, const char* parameter, const double* values,
                                size_t value_count, const char* csv_path);

#ifdef __cplusplus
}
#endif

#endif /* GMSR_H */
