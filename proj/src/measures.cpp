#include "gmsr/measures.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "parallel.hpp"

namespace gmsr {

double angle_between_normals(const Vec3& n, const Vec3& m) {
  // atan2 keeps full precision for nearly parallel normals, where acos does not.
  return std::atan2(norm(cross(n, m)), dot(n, m));
}

double harmonic_mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double inv_sum = 0;
  for (double x : values) {
    if (x == 0.0) return 0.0;
    inv_sum += 1.0 / x;
  }
  return static_cast<double>(values.size()) / inv_sum;
}

namespace {

void check_depth(const RingNeighborhoods& rings, const Mesh& mesh, int ring_count) {
  if (ring_count < 1) throw Error(Error::Kind::InvalidArgument, "ring count must be >= 1");
  if (rings.ring_count() < ring_count) {
    throw Error(Error::Kind::InvalidArgument, "ring neighbourhoods are shallower than the requested ring count");
  }
  if (rings.vertex_count() != mesh.vertex_count()) {
    throw Error(Error::Kind::InvalidArgument, "ring neighbourhoods were built for a different mesh");
  }
}

template <typename Term>
std::vector<double> summed_harmonic(const Mesh& mesh, const NormalField& normals, const RingNeighborhoods& rings,
                                    int ring_count, Term&& term) {
  check_depth(rings, mesh, ring_count);
  std::vector<double> out(mesh.vertex_count(), 0.0);
  detail::parallel_for(mesh.vertex_count(), [&](std::size_t i) {
    const auto v = static_cast<VertexIndex>(i);
    if (!normals.valid[v]) return;
    std::vector<double> terms;
    double sum = 0;
    for (int k = 1; k <= ring_count; ++k) {
      terms.clear();
      for (VertexIndex u : rings.ring(v, k)) {
        if (auto t = term(v, u)) terms.push_back(*t);
      }
      sum += harmonic_mean(terms);
    }
    out[i] = sum;
  });
  return out;
}

}  // namespace

std::vector<double> distance_measure(const Mesh& mesh, const NormalField& normals, const RingNeighborhoods& rings,
                                     int ring_count) {
  return summed_harmonic(mesh, normals, rings, ring_count, [&](VertexIndex v, VertexIndex u) -> std::optional<double> {
    return tangent_plane_distance(mesh.position(v), normals.normals[v], mesh.position(u));
  });
}

std::vector<double> angle_measure(const Mesh& mesh, const NormalField& normals, const RingNeighborhoods& rings,
                                  int ring_count) {
  return summed_harmonic(mesh, normals, rings, ring_count, [&](VertexIndex v, VertexIndex u) -> std::optional<double> {
    if (!normals.valid[u]) return std::nullopt;
    return angle_between_normals(normals.normals[v], normals.normals[u]);
  });
}

MeasureField compute_measures(const Mesh& mesh, const NormalField& normals, const RingNeighborhoods& rings,
                              int ring_count) {
  MeasureField field;
  field.rings = ring_count;
  field.distance = distance_measure(mesh, normals, rings, ring_count);
  field.angle = angle_measure(mesh, normals, rings, ring_count);
  field.evaluable = normals.valid;
  return field;
}

}  // namespace gmsr
