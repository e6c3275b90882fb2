#pragma once

#include <span>
#include <vector>

#include "gmsr/mesh.hpp"
#include "gmsr/scale_space.hpp"

namespace gmsr {

inline constexpr int kDefaultRings = 6;

// |n . (p - v)| for a unit normal n at v.
inline double tangent_plane_distance(const Vec3& v, const Vec3& n, const Vec3& p) {
  return std::abs(dot(n, p - v));
}

// Angle between two unit vectors, in [0, pi].
double angle_between_normals(const Vec3& n, const Vec3& m);

// W / sum(1/x_j). Any zero entry, or an empty list, yields 0 (the limit of
// the expression as an entry goes to 0).
double harmonic_mean(std::span<const double> values);

// Per-vertex summed harmonic measures for one level. Vertices whose normal is
// degenerate are not evaluable: `evaluable[v]` is false and both values are 0.
struct MeasureField {
  int rings = 0;
  std::vector<double> distance;  // summed harmonic tangent-plane distance
  std::vector<double> angle;     // summed harmonic normal angle, radians
  std::vector<bool> evaluable;
};

std::vector<double> distance_measure(const Mesh& mesh, const NormalField& normals, const RingNeighborhoods& rings,
                                     int ring_count);
std::vector<double> angle_measure(const Mesh& mesh, const NormalField& normals, const RingNeighborhoods& rings,
                                  int ring_count);

// Both measures over rings 1..ring_count. Neighbours with a degenerate normal
// are left out of the angle term; an empty ring contributes 0 to the sum.
MeasureField compute_measures(const Mesh& mesh, const NormalField& normals, const RingNeighborhoods& rings,
                              int ring_count);
inline MeasureField compute_measures(const ScaleLevel& level, const RingNeighborhoods& rings, int ring_count) {
  return compute_measures(level.mesh, level.normals, rings, ring_count);
}

}  // namespace gmsr
