#pragma once

#include <map>
#include <string>
#include <vector>

#include "gmsr/detector.hpp"
#include "gmsr/eval.hpp"

namespace gmsr {

struct ModelMesh {
  std::string id;  // file stem
  Mesh mesh;
};

// Every *.off / *.obj file in `dir`, sorted by id.
std::vector<ModelMesh> load_mesh_directory(const std::string& dir);

// Every *.json detection file in `dir`, keyed by file stem.
std::map<std::string, std::vector<VertexIndex>> load_detection_directory(const std::string& dir);

struct EvaluationReport {
  std::vector<CellResult> cells;
  Aggregate summary;
  std::vector<std::string> warnings;
  std::vector<std::string> skipped_models;
};

// Scores every model named in the ground truth. A model without a mesh or a
// detection list is skipped and listed in `skipped_models`.
EvaluationReport evaluate_models(const std::vector<ModelMesh>& meshes,
                                 const std::map<std::string, std::vector<VertexIndex>>& detections,
                                 const GroundTruthLoad& ground_truth, const EvaluationGrid& grid);

EvaluationReport evaluate_directories(const std::string& detections_dir, const std::string& ground_truth_path,
                                      const std::string& mesh_dir, const EvaluationGrid& grid);

// Summary document: grid, means, per-r and per-(n, sigma, r) curves, warnings.
std::string evaluation_summary_json(const EvaluationReport& report, const EvaluationGrid& grid);

enum class SweepParameter { Rings, Alpha, NmsRings, Beta, DistanceWeight };

SweepParameter parse_sweep_parameter(const std::string& name);
std::string to_string(SweepParameter p);

struct SweepRow {
  double value = 0;
  double mean_iou = 0;
  double mean_f1 = 0;
  std::size_t cells = 0;
};

// Runs detection and evaluation once per parameter value.
std::vector<SweepRow> sweep(const std::vector<ModelMesh>& meshes, const GroundTruthLoad& ground_truth,
                            const EvaluationGrid& grid, const DetectorConfig& base, SweepParameter parameter,
                            const std::vector<double>& values);

void write_sweep_csv(std::ostream& out, SweepParameter parameter, const DetectorConfig& base,
                     const std::vector<SweepRow>& rows);

}  // namespace gmsr
