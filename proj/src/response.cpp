#include "gmsr/response.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "parallel.hpp"

namespace gmsr {

std::vector<double> normalize_min_max(std::span<const double> values, const std::vector<bool>& evaluable) {
  if (evaluable.size() != values.size()) {
    throw Error(Error::Kind::InvalidArgument, "evaluable mask does not match field size");
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!evaluable[i]) continue;
    lo = std::min(lo, values[i]);
    hi = std::max(hi, values[i]);
  }
  std::vector<double> out(values.size(), 0.0);
  const double range = hi - lo;
  if (!(range > kDegenerateRangeTolerance * std::max(std::abs(lo), std::abs(hi)))) return out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (evaluable[i]) out[i] = (values[i] - lo) / range;
  }
  return out;
}

std::vector<double> per_scale_response(const MeasureField& measures, double alpha, double distance_weight) {
  if (measures.distance.size() != measures.angle.size()) {
    throw Error(Error::Kind::InvalidArgument, "distance and angle fields differ in size");
  }
  const auto d = normalize_min_max(measures.distance, measures.evaluable);
  const auto a = normalize_min_max(measures.angle, measures.evaluable);
  std::vector<double> rho(d.size());
  for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = distance_weight * d[i] + alpha * a[i];
  return rho;
}

std::vector<double> final_response(std::span<const std::vector<double>> per_scale) {
  if (per_scale.empty()) throw Error(Error::Kind::InvalidArgument, "at least one scale is required");
  std::vector<double> rho = per_scale[0];
  for (std::size_t s = 1; s < per_scale.size(); ++s) {
    if (per_scale[s].size() != rho.size()) throw Error(Error::Kind::InvalidArgument, "scale fields differ in size");
    for (std::size_t i = 0; i < rho.size(); ++i) rho[i] *= per_scale[s][i];
  }
  return rho;
}

CandidateSet non_maxima_suppression(const RingNeighborhoods& rings, std::span<const double> rho, int nms_rings) {
  if (nms_rings < 1) throw Error(Error::Kind::InvalidArgument, "NMS ring count must be >= 1");
  if (rings.ring_count() < nms_rings) {
    throw Error(Error::Kind::InvalidArgument, "ring neighbourhoods are shallower than the NMS ring count");
  }
  if (rings.vertex_count() != rho.size()) throw Error(Error::Kind::InvalidArgument, "response field size mismatch");

  std::vector<char> keep(rho.size(), 0);
  detail::parallel_for(rho.size(), [&](std::size_t i) {
    const double r = rho[i];
    if (!(r > 0)) return;
    for (VertexIndex u : rings.within(static_cast<VertexIndex>(i), nms_rings)) {
      if (!(r > rho[u])) return;
    }
    keep[i] = 1;
  });

  CandidateSet out;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (keep[i]) out.push_back({static_cast<VertexIndex>(i), rho[i]});
  }
  std::stable_sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) { return a.rho > b.rho; });
  return out;
}

}  // namespace gmsr
