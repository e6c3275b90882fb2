#include "gmsr/scale_space.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <unordered_map>

#include "parallel.hpp"

namespace gmsr {

namespace {

// Uniform hash grid over vertex positions with cell edge == query radius, so
// a ball query only touches the 27 cells around the query point.
class PointGrid {
 public:
  using Coord = std::array<std::int64_t, 3>;

  PointGrid(std::span<const Vec3> points, double cell) : inv_cell_(1.0 / cell) {
    origin_ = points.empty() ? Vec3{} : points[0];
    for (const auto& p : points) {
      origin_ = {std::min(origin_.x, p.x), std::min(origin_.y, p.y), std::min(origin_.z, p.z)};
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
      cells_[coord(points[i])].push_back(static_cast<VertexIndex>(i));
    }
  }

  template <typename Visit>
  void for_each_near(const Vec3& p, Visit&& visit) const {
    const auto c = coord(p);
    for (std::int64_t dx = -1; dx <= 1; ++dx)
      for (std::int64_t dy = -1; dy <= 1; ++dy)
        for (std::int64_t dz = -1; dz <= 1; ++dz) {
          auto it = cells_.find({c[0] + dx, c[1] + dy, c[2] + dz});
          if (it == cells_.end()) continue;
          for (VertexIndex q : it->second) visit(q);
        }
  }

 private:
  Coord coord(const Vec3& p) const {
    auto axis = [&](double v, double o) {
      // Clamp keeps absurdly small radii from overflowing; membership is
      // decided by exact distance, so clamped cells only cost extra checks.
      const double c = std::floor((v - o) * inv_cell_);
      return static_cast<std::int64_t>(std::clamp(c, -1e15, 1e15));
    };
    return {axis(p.x, origin_.x), axis(p.y, origin_.y), axis(p.z, origin_.z)};
  }

  struct CoordHash {
    std::size_t operator()(const Coord& c) const {
      std::uint64_t h = 1469598103934665603ull;
      for (auto v : c) h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      return h;
    }
  };

  double inv_cell_;
  Vec3 origin_;
  std::unordered_map<Coord, std::vector<VertexIndex>, CoordHash> cells_;
};

}  // namespace

double base_scale(const Mesh& mesh) {
  const double diag = bbox_diagonal(mesh);
  if (!(diag > 0)) throw Error(Error::Kind::InvalidArgument, "mesh has zero extent; base scale undefined");
  return kBaseScaleFraction * diag;
}

Mesh gaussian_smooth(const Mesh& mesh, double sigma) {
  if (!(sigma > 0) || !std::isfinite(sigma)) {
    throw Error(Error::Kind::InvalidArgument, "smoothing scale must be positive");
  }
  const auto src = mesh.vertices();
  const double radius = 3.0 * sigma;
  const double radius2 = radius * radius;
  const double inv_two_var = 1.0 / (2.0 * sigma * sigma);
  PointGrid grid(src, radius);

  std::vector<Vec3> out(src.size());
  detail::parallel_for(src.size(), [&](std::size_t i) {
    const Vec3 p = src[i];
    // Accumulating offsets keeps the result translation equivariant up to rounding.
    double weight_sum = 0;
    Vec3 offset_sum;
    grid.for_each_near(p, [&](VertexIndex q) {
      const Vec3 d = src[q] - p;
      const double d2 = dot(d, d);
      if (d2 > radius2) return;
      const double w = std::exp(-d2 * inv_two_var);
      weight_sum += w;
      offset_sum += w * d;
    });
    out[i] = p + (1.0 / weight_sum) * offset_sum;
  });
  return mesh.with_positions(std::move(out));
}

ScaleStack build_scale_stack(const Mesh& mesh, std::span<const int> multipliers) {
  if (multipliers.empty()) throw Error(Error::Kind::InvalidArgument, "at least one scale multiplier is required");
  for (std::size_t i = 0; i < multipliers.size(); ++i) {
    if (multipliers[i] <= 0) throw Error(Error::Kind::InvalidArgument, "scale multipliers must be positive");
    if (i > 0 && multipliers[i] <= multipliers[i - 1]) {
      throw Error(Error::Kind::InvalidArgument, "scale multipliers must be strictly increasing");
    }
  }
  ScaleStack stack;
  stack.base_scale = base_scale(mesh);
  for (int s : multipliers) {
    ScaleLevel level;
    level.multiplier = s;
    level.sigma = s * stack.base_scale;
    level.mesh = gaussian_smooth(mesh, level.sigma);
    level.normals = compute_vertex_normals(level.mesh);
    stack.levels.push_back(std::move(level));
  }
  return stack;
}

}  // namespace gmsr
