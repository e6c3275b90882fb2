#include "gmsr/detector.hpp"

#include <algorithm>
#include <cmath>

namespace gmsr {

void DetectorConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(Error::Kind::InvalidArgument, msg); };
  if (rings < 1) fail("rings must be >= 1");
  if (nms_rings < 1) fail("nms-rings must be >= 1");
  if (!(alpha >= 0) || !std::isfinite(alpha)) fail("alpha must be >= 0");
  if (!(beta >= 0) || !std::isfinite(beta)) fail("beta must be >= 0");
  if (!(distance_weight >= 0) || !std::isfinite(distance_weight)) fail("distance weight must be >= 0");
  if (scales.empty()) fail("at least one scale is required");
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (scales[i] < 1) fail("scales must be positive integers");
    if (i > 0 && scales[i] <= scales[i - 1]) fail("scales must be strictly increasing");
  }
}

Detection detect(const Mesh& mesh, const DetectorConfig& config) {
  config.validate();
  // Connectivity is shared by every level, so the rings are built once.
  const RingNeighborhoods rings(mesh, std::max(config.rings, config.nms_rings));
  const ScaleStack stack = build_scale_stack(mesh, config.scales);

  Detection out;
  out.base_scale = stack.base_scale;
  std::vector<std::vector<double>> per_scale;
  std::vector<bool> degenerate(mesh.vertex_count(), false);
  for (const auto& level : stack.levels) {
    ScaleResponse s{level.multiplier, level.sigma, compute_measures(level, rings, config.rings), {}};
    s.rho = per_scale_response(s.measures, config.alpha, config.distance_weight);
    for (VertexIndex v : level.normals.degenerate) degenerate[v] = true;
    per_scale.push_back(s.rho);
    out.scales.push_back(std::move(s));
  }
  out.rho = final_response(per_scale);
  for (std::size_t v = 0; v < degenerate.size(); ++v) {
    if (degenerate[v]) {
      out.degenerate.push_back(static_cast<VertexIndex>(v));
      out.rho[v] = 0;
    }
  }
  out.candidates = non_maxima_suppression(rings, out.rho, config.nms_rings);
  out.points = sparse_refine(out.candidates, config.beta);
  return out;
}

}  // namespace gmsr
