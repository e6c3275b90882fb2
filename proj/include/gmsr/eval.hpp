#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "gmsr/mesh.hpp"

namespace gmsr {

// Single-source shortest paths over the edge graph with Euclidean edge
// lengths. Vertices farther than `cutoff` (or unreachable) get +inf.
std::vector<double> geodesic_distances(const Mesh& mesh, VertexIndex source,
                                       double cutoff = std::numeric_limits<double>::infinity());

// Copy of the mesh scaled about the origin so that its bounding-box diagonal
// is 1; evaluation tolerances are expressed in these units.
Mesh normalized_to_unit_diagonal(const Mesh& mesh);

struct MatchResult {
  std::size_t true_positives = 0;   // N_C
  std::size_t false_positives = 0;  // N_A - N_C
  std::size_t false_negatives = 0;  // N_G - N_C
  std::size_t ground_truth_count = 0;
  std::size_t detected_count = 0;
  double tolerance = 0;
};

// Geodesic balls of radius `max_tolerance` around each detected point,
// computed once and reused for every ground-truth set and tolerance.
class DetectionNeighborhoods {
 public:
  DetectionNeighborhoods(const Mesh& mesh, std::span<const VertexIndex> detected, double max_tolerance);

  std::size_t detected_count() const { return detected_.size(); }
  double max_tolerance() const { return max_tolerance_; }

  // A ground-truth point g is correctly identified when some detected point a
  // has g as its nearest ground-truth point (distance ties go to the lower
  // vertex index) and d(g, a) <= tolerance. Requires tolerance <= max_tolerance().
  MatchResult match(std::span<const VertexIndex> ground_truth, double tolerance) const;

 private:
  std::size_t vertex_count_;
  double max_tolerance_;
  std::vector<VertexIndex> detected_;                       // deduplicated, ascending
  std::vector<std::vector<std::pair<VertexIndex, double>>> balls_;  // sorted by vertex
};

// Convenience wrapper around DetectionNeighborhoods for a single query.
MatchResult match_points(const Mesh& mesh, std::span<const VertexIndex> ground_truth,
                         std::span<const VertexIndex> detected, double tolerance);

// TP / (TP + FP + FN); nullopt when all three counts are zero.
std::optional<double> iou(const MatchResult& m);
// 2TP / (2TP + FP + FN); nullopt when all three counts are zero.
std::optional<double> f1(const MatchResult& m);

struct GroundTruthKey {
  std::string model;
  int subjects = 0;              // n
  std::int64_t sigma_micros = 0;  // sigma scaled by 1e6 and rounded

  static GroundTruthKey make(std::string model, int subjects, double sigma);
  double sigma() const { return static_cast<double>(sigma_micros) * 1e-6; }
  friend auto operator<=>(const GroundTruthKey&, const GroundTruthKey&) = default;
};

struct GroundTruthSet {
  std::map<GroundTruthKey, std::vector<VertexIndex>> entries;

  const std::vector<VertexIndex>* find(const std::string& model, int subjects, double sigma) const;
  std::vector<std::string> models() const;
};

struct GroundTruthLoad {
  GroundTruthSet set;
  std::vector<std::string> warnings;
};

// Plain-text ground truth, one record per line:
//   <model> <n> <sigma> <vertex> <vertex> ...
// '#' starts a comment. Duplicate indices are dropped with a warning; a set
// that grows with n at fixed sigma is reported as a warning. When
// `known_models` is non-empty, records for other models are flagged.
GroundTruthLoad parse_ground_truth(std::istream& in, std::span<const std::string> known_models = {});
GroundTruthLoad load_ground_truth(const std::string& path, std::span<const std::string> known_models = {});

struct EvaluationGrid {
  std::vector<int> subjects;     // n
  std::vector<double> sigmas;    // sigma
  std::vector<double> tolerances;  // r, unit-diagonal lengths

  // n in {2..23}, sigma in {0.01..0.1}, r in {0.005, 0.01, ..., 0.12}.
  static EvaluationGrid dataset_a();
  // n in {2..16}, same sigma and r grids.
  static EvaluationGrid dataset_b();
};

struct CellResult {
  std::string model;
  int subjects = 0;
  double sigma = 0;
  MatchResult match;
  std::optional<double> iou;
  std::optional<double> f1;
};

// Scores one model's detections against every (n, sigma, r) cell of the grid.
// The mesh is normalised to a unit diagonal first. Missing ground-truth
// records are skipped and reported through `warnings`.
std::vector<CellResult> evaluate_model(const Mesh& mesh, const std::string& model,
                                       std::span<const VertexIndex> detected, const GroundTruthSet& gt,
                                       const EvaluationGrid& grid, std::vector<std::string>& warnings);

struct CurvePoint {
  int subjects = 0;     // 0 when averaged over n
  double sigma = 0;     // 0 when averaged over sigma
  double tolerance = 0;
  double mean_iou = 0;
  double mean_f1 = 0;
  std::size_t cells = 0;
};

struct Aggregate {
  double mean_iou = 0;
  double mean_f1 = 0;
  std::size_t cells = 0;          // all cells seen
  std::size_t defined_cells = 0;  // cells with TP + FP + FN > 0
  std::vector<CurvePoint> per_tolerance;            // averaged over model, n, sigma
  std::vector<CurvePoint> per_subjects_sigma;       // averaged over model, per (n, sigma, r)
  // (model, n, sigma) series whose IOU or F1 decreases as r grows.
  std::size_t monotonicity_violations = 0;
};

// Unweighted means over cells with defined scores.
Aggregate aggregate(std::span<const CellResult> cells);

// Shortest decimal text that parses back to the same double.
std::string format_number(double x);

// One CSV row per cell: model,n,sigma,r,TP,FP,FN,IOU,F1 (undefined scores empty).
void write_cells_csv(std::ostream& out, std::span<const CellResult> cells);

}  // namespace gmsr
