#pragma once

#include <span>
#include <vector>

#include "gmsr/measures.hpp"
#include "gmsr/mesh.hpp"

namespace gmsr {

inline constexpr double kDefaultAlpha = 2.5;
inline constexpr int kDefaultNmsRings = 10;

// Relative width below which a measure's range counts as constant. Exactly
// symmetric meshes (platonic solids) only differ by rounding.
inline constexpr double kDegenerateRangeTolerance = 1e-12;

// Min-max normalisation over the evaluable vertices. Non-evaluable vertices
// and every vertex of a constant field map to 0.
std::vector<double> normalize_min_max(std::span<const double> values, const std::vector<bool>& evaluable);

// rho_s = distance_weight * norm(distance) + alpha * norm(angle).
// distance_weight is 1 for the detector; 0 gives the angle-only variant.
std::vector<double> per_scale_response(const MeasureField& measures, double alpha, double distance_weight = 1.0);

// Elementwise product over the scales.
std::vector<double> final_response(std::span<const std::vector<double>> per_scale);

struct Candidate {
  VertexIndex vertex;
  double rho;
  friend bool operator==(const Candidate&, const Candidate&) = default;
};

// Sorted by descending rho, ties by ascending vertex index.
using CandidateSet = std::vector<Candidate>;

// v is kept iff rho(v) > 0 and rho(v) > rho(u) for every u within graph
// distance 1..nms_rings. Strict, so plateaus produce no candidate.
CandidateSet non_maxima_suppression(const RingNeighborhoods& rings, std::span<const double> rho, int nms_rings);

}  // namespace gmsr
