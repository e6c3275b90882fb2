#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gmsr {

using VertexIndex = std::uint32_t;

// Error raised by the core library. `kind` is mapped onto the C status codes.
class Error : public std::runtime_error {
 public:
  enum class Kind { InvalidArgument, Io, Parse, Data };

  Error(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

struct Vec3 {
  double x = 0, y = 0, z = 0;

  friend constexpr Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend constexpr Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend constexpr Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
  friend constexpr Vec3 operator*(Vec3 a, double s) { return s * a; }
  constexpr Vec3& operator+=(Vec3 b) {
    x += b.x;
    y += b.y;
    z += b.z;
    return *this;
  }
  friend constexpr bool operator==(Vec3, Vec3) = default;
};

constexpr double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(Vec3 a, Vec3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }
constexpr double squared_distance(Vec3 a, Vec3 b) { return dot(a - b, a - b); }

using Triangle = std::array<VertexIndex, 3>;

// Triangle mesh with derived 1-ring vertex adjacency. Immutable once built;
// positions of scale-space levels are swapped in through with_positions().
class Mesh {
 public:
  Mesh() = default;
  // Validates indices (in range, three distinct per face) and builds adjacency.
  Mesh(std::vector<Vec3> vertices, std::vector<Triangle> faces);

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t face_count() const { return faces_.size(); }
  std::span<const Vec3> vertices() const { return vertices_; }
  std::span<const Triangle> faces() const { return faces_; }
  const Vec3& position(VertexIndex v) const { return vertices_[v]; }

  // Sorted 1-ring neighbours of v.
  std::span<const VertexIndex> neighbors(VertexIndex v) const {
    return {adjacency_.data() + adjacency_offsets_[v],
            adjacency_.data() + adjacency_offsets_[v + 1]};
  }

  // Same connectivity, new coordinates. Requires positions.size() == vertex_count().
  Mesh with_positions(std::vector<Vec3> positions) const;

  friend bool operator==(const Mesh& a, const Mesh& b) {
    return a.vertices_ == b.vertices_ && a.faces_ == b.faces_;
  }

 private:
  std::vector<Vec3> vertices_;
  std::vector<Triangle> faces_;
  std::vector<std::size_t> adjacency_offsets_;
  std::vector<VertexIndex> adjacency_;
};

// OFF / OBJ readers. Triangles only; errors carry the 1-based line number.
Mesh parse_off(std::istream& in);
Mesh parse_off(std::string_view text);
Mesh parse_obj(std::istream& in);
Mesh parse_obj(std::string_view text);
// Dispatches on the file extension (.off / .obj, case-insensitive).
Mesh load_mesh(const std::string& path);

// Canonical OFF writer: 17 significant digits, so parse_off(write_off(m)) == m.
void write_off(std::ostream& out, const Mesh& mesh);
std::string write_off(const Mesh& mesh);

struct NormalField {
  std::vector<Vec3> normals;
  // Vertices without incident faces or with a zero area-weighted sum. Their
  // entry in `normals` is (0,0,0) and they are excluded from detection.
  std::vector<VertexIndex> degenerate;
  std::vector<bool> valid;
};

// Area-weighted average of incident face normals, normalised.
NormalField compute_vertex_normals(const Mesh& mesh);

// Number of shared edges whose two faces traverse it in the same direction,
// i.e. the faces disagree on orientation. Used for a load-time warning only.
std::size_t count_inconsistent_windings(const Mesh& mesh);

// Breadth-first layers V_1(v) .. V_K(v) for every vertex, stored flat.
class RingNeighborhoods {
 public:
  RingNeighborhoods() = default;
  RingNeighborhoods(const Mesh& mesh, int ring_count);
  // Same layering over an explicit adjacency list (symmetric, no self loops).
  RingNeighborhoods(const std::vector<std::vector<VertexIndex>>& adjacency, int ring_count);

  int ring_count() const { return ring_count_; }
  std::size_t vertex_count() const { return ring_offsets_.empty() ? 0 : ring_offsets_.size() / ring_count_; }

  // Vertices at graph distance exactly k (1-based) from v, ascending index order.
  std::span<const VertexIndex> ring(VertexIndex v, int k) const {
    const std::size_t slot = static_cast<std::size_t>(v) * ring_count_ + (k - 1);
    return {members_.data() + ring_offsets_[slot], members_.data() + ring_end(slot)};
  }
  std::size_t ring_size(VertexIndex v, int k) const { return ring(v, k).size(); }

  // Union of rings 1..depth (depth <= ring_count()).
  std::span<const VertexIndex> within(VertexIndex v, int depth) const {
    const std::size_t first = static_cast<std::size_t>(v) * ring_count_;
    return {members_.data() + ring_offsets_[first], members_.data() + ring_end(first + depth - 1)};
  }

 private:
  template <typename Neighbors>
  void build(std::size_t vertex_count, Neighbors&& neighbors);

  std::size_t ring_end(std::size_t slot) const {
    return slot + 1 < ring_offsets_.size() ? ring_offsets_[slot + 1] : members_.size();
  }

  int ring_count_ = 0;
  std::vector<std::size_t> ring_offsets_;
  std::vector<VertexIndex> members_;
};

RingNeighborhoods k_rings(const Mesh& mesh, int ring_count);

// Length of the axis-aligned bounding-box main diagonal. Throws on an empty mesh.
double bbox_diagonal(const Mesh& mesh);

}  // namespace gmsr
