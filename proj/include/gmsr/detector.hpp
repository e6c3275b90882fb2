#pragma once

#include <string>
#include <vector>

#include "gmsr/measures.hpp"
#include "gmsr/mesh.hpp"
#include "gmsr/refine.hpp"
#include "gmsr/response.hpp"
#include "gmsr/scale_space.hpp"

namespace gmsr {

struct DetectorConfig {
  int rings = kDefaultRings;           // K, rings per geometric measure
  double alpha = kDefaultAlpha;        // weight of the angle term
  int nms_rings = kDefaultNmsRings;    // N, suppression neighbourhood depth
  double beta = kDefaultBeta;          // l0 penalty
  std::vector<int> scales{1, 3, 5};    // multipliers of the base scale
  double distance_weight = 1.0;        // 0 selects the angle-only response

  // Throws Error::Kind::InvalidArgument describing the first bad field.
  void validate() const;
};

struct ScaleResponse {
  int multiplier;
  double sigma;
  MeasureField measures;
  std::vector<double> rho;
};

struct Detection {
  double base_scale = 0;
  std::vector<ScaleResponse> scales;
  std::vector<double> rho;              // final multi-scale response
  std::vector<VertexIndex> degenerate;  // vertices excluded for lack of a normal
  CandidateSet candidates;
  InterestPointSet points;
};

// Full pipeline: scale stack, measures, per-scale and product response,
// non-maxima suppression and l0 refinement. Deterministic.
Detection detect(const Mesh& mesh, const DetectorConfig& config = {});

}  // namespace gmsr
