#pragma once

#include <random>
#include <string>
#include <vector>

#include "gmsr/mesh.hpp"

namespace gmsr::testing {

Mesh single_triangle();
// Two triangles spanning [0,1]^2 in the z = 0 plane, counter-clockwise.
Mesh flat_square();
// Vertices +-x, +-y, +-z (apex +z is vertex 4), outward winding.
Mesh octahedron();
// 8 corners, 12 triangles. Every face diagonal runs through corner (0,0,0)
// or (1,1,1), so those two corners see 2 triangles from each incident face.
Mesh unit_cube();
// Regular icosahedron on the unit sphere.
Mesh icosahedron();
// Icosahedron subdivided `levels` times and projected to the unit sphere.
Mesh icosphere(int levels);
// Latitude/longitude sphere: 2 poles + (stacks - 1) rings of `slices`.
Mesh uv_sphere(int stacks, int slices);
// Surface of [0,1]^3 with an n x n grid per face, outward winding. Quads are
// split along diagonals radiating from the face centre, so the triangulation
// has the cube's mirror symmetries.
Mesh subdivided_cube(int n);
// Index of the lattice vertex (i, j, k) of subdivided_cube(n).
VertexIndex cube_vertex(int n, int i, int j, int k);
// Two planar strips meeting at a 90 degree dihedral along the x axis. The
// returned vertex sits on the crease.
struct Wedge {
  Mesh mesh;
  VertexIndex crease_vertex;
};
Wedge wedge();
// Strip of triangles whose lower row 0..count-1 lies on the x axis with unit
// spacing; the upper row is far away, so edge-graph geodesics between lower
// vertices run along the axis.
Mesh line_strip(int count);
// icosphere with smooth radial bumps; generic geometry without symmetric ties.
Mesh bumpy_sphere(int levels);

// Models with analytically known salient vertices: the 16x16 cube with its
// corners, and spheres carrying Gaussian bumps whose tips are the targets.
struct SalientModel {
  std::string id;
  Mesh mesh;
  std::vector<VertexIndex> ground_truth;
};
std::vector<SalientModel> salient_corpus();

// Random rotation (uniform quaternion) followed by a translation.
struct RigidMotion {
  double r[3][3];
  Vec3 t;
  Vec3 apply(const Vec3& p) const;
};
RigidMotion random_rigid_motion(std::mt19937_64& rng);
Mesh transformed(const Mesh& mesh, const RigidMotion& motion);
Mesh scaled(const Mesh& mesh, double factor);
Mesh translated(const Mesh& mesh, const Vec3& offset);

}  // namespace gmsr::testing
