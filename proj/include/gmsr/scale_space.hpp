#pragma once

#include <span>
#include <vector>

#include "gmsr/mesh.hpp"

namespace gmsr {

// Fraction of the bounding-box diagonal used as the base smoothing scale.
inline constexpr double kBaseScaleFraction = 0.003;

struct ScaleLevel {
  int multiplier = 1;
  double sigma = 0;  // Gaussian standard deviation, multiplier * base scale
  Mesh mesh;         // smoothed positions, source connectivity
  NormalField normals;
};

struct ScaleStack {
  double base_scale = 0;
  std::vector<ScaleLevel> levels;
};

// 0.3% of the bounding-box diagonal. Throws for empty or zero-extent meshes.
double base_scale(const Mesh& mesh);

// Replaces each vertex by the normalised Gaussian-weighted average of all
// source vertices within Euclidean distance 3*sigma (the vertex itself
// included). Connectivity is unchanged.
Mesh gaussian_smooth(const Mesh& mesh, double sigma);

// One smoothed level per multiplier with normals recomputed on the smoothed
// geometry. Multipliers must be positive and strictly increasing.
ScaleStack build_scale_stack(const Mesh& mesh, std::span<const int> multipliers);

}  // namespace gmsr
