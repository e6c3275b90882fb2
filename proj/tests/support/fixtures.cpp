#include "fixtures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

namespace gmsr::testing {

namespace {

// Flips triangles whose normal points toward `inside`.
void orient_outward(const std::vector<Vec3>& v, std::vector<Triangle>& faces, const Vec3& inside) {
  for (auto& t : faces) {
    const Vec3 n = cross(v[t[1]] - v[t[0]], v[t[2]] - v[t[0]]);
    const Vec3 c = (1.0 / 3.0) * (v[t[0]] + v[t[1]] + v[t[2]]);
    if (dot(n, c - inside) < 0) std::swap(t[1], t[2]);
  }
}

Vec3 unit(Vec3 p) { return (1.0 / norm(p)) * p; }

}  // namespace

Mesh single_triangle() { return Mesh({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, {{0, 1, 2}}); }

Mesh flat_square() { return Mesh({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}}, {{0, 1, 2}, {0, 2, 3}}); }

Mesh octahedron() {
  std::vector<Vec3> v{{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  std::vector<Triangle> f;
  for (VertexIndex x : {0u, 1u})
    for (VertexIndex y : {2u, 3u})
      for (VertexIndex z : {4u, 5u}) f.push_back({x, y, z});
  orient_outward(v, f, {0, 0, 0});
  return Mesh(std::move(v), std::move(f));
}

Mesh unit_cube() {
  std::vector<Vec3> v;
  for (int i = 0; i < 8; ++i) v.push_back({double(i & 1), double((i >> 1) & 1), double((i >> 2) & 1)});
  auto id = [](int x, int y, int z) { return static_cast<VertexIndex>(x | (y << 1) | (z << 2)); };
  std::vector<Triangle> f;
  // Faces through corner 0 split along the diagonal from 0; faces through
  // corner 7 along the diagonal from 7.
  f.push_back({id(0, 0, 0), id(1, 0, 0), id(1, 1, 0)});
  f.push_back({id(0, 0, 0), id(1, 1, 0), id(0, 1, 0)});
  f.push_back({id(0, 0, 0), id(0, 1, 0), id(0, 1, 1)});
  f.push_back({id(0, 0, 0), id(0, 1, 1), id(0, 0, 1)});
  f.push_back({id(0, 0, 0), id(0, 0, 1), id(1, 0, 1)});
  f.push_back({id(0, 0, 0), id(1, 0, 1), id(1, 0, 0)});
  f.push_back({id(1, 1, 1), id(1, 0, 1), id(1, 0, 0)});
  f.push_back({id(1, 1, 1), id(1, 0, 0), id(1, 1, 0)});
  f.push_back({id(1, 1, 1), id(1, 1, 0), id(0, 1, 0)});
  f.push_back({id(1, 1, 1), id(0, 1, 0), id(0, 1, 1)});
  f.push_back({id(1, 1, 1), id(0, 1, 1), id(0, 0, 1)});
  f.push_back({id(1, 1, 1), id(0, 0, 1), id(1, 0, 1)});
  orient_outward(v, f, {0.5, 0.5, 0.5});
  return Mesh(std::move(v), std::move(f));
}

Mesh icosahedron() {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> v{{-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0}, {0, -1, phi}, {0, 1, phi},
                      {0, -1, -phi}, {0, 1, -phi}, {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1}};
  for (auto& p : v) p = unit(p);
  std::vector<Triangle> f{{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
                          {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
                          {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  orient_outward(v, f, {0, 0, 0});
  return Mesh(std::move(v), std::move(f));
}

Mesh icosphere(int levels) {
  Mesh base = icosahedron();
  std::vector<Vec3> v(base.vertices().begin(), base.vertices().end());
  std::vector<Triangle> f(base.faces().begin(), base.faces().end());
  for (int l = 0; l < levels; ++l) {
    std::map<std::pair<VertexIndex, VertexIndex>, VertexIndex> mid;
    auto midpoint = [&](VertexIndex a, VertexIndex b) {
      auto key = std::minmax(a, b);
      auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      v.push_back(unit(0.5 * (v[a] + v[b])));
      const auto id = static_cast<VertexIndex>(v.size() - 1);
      mid.emplace(key, id);
      return id;
    };
    std::vector<Triangle> next;
    for (const auto& t : f) {
      const VertexIndex ab = midpoint(t[0], t[1]), bc = midpoint(t[1], t[2]), ca = midpoint(t[2], t[0]);
      next.push_back({t[0], ab, ca});
      next.push_back({t[1], bc, ab});
      next.push_back({t[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    f = std::move(next);
  }
  return Mesh(std::move(v), std::move(f));
}

Mesh uv_sphere(int stacks, int slices) {
  const double pi = std::acos(-1.0);
  std::vector<Vec3> v{{0, 0, 1}};
  for (int i = 1; i < stacks; ++i) {
    const double theta = pi * i / stacks;
    for (int j = 0; j < slices; ++j) {
      const double phi = 2 * pi * j / slices;
      v.push_back({std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)});
    }
  }
  v.push_back({0, 0, -1});
  const auto south = static_cast<VertexIndex>(v.size() - 1);
  auto ring = [&](int i, int j) { return static_cast<VertexIndex>(1 + (i - 1) * slices + (j % slices)); };
  std::vector<Triangle> f;
  for (int j = 0; j < slices; ++j) {
    f.push_back({0, ring(1, j), ring(1, j + 1)});
    f.push_back({south, ring(stacks - 1, j + 1), ring(stacks - 1, j)});
  }
  for (int i = 1; i < stacks - 1; ++i) {
    for (int j = 0; j < slices; ++j) {
      f.push_back({ring(i, j), ring(i + 1, j), ring(i + 1, j + 1)});
      f.push_back({ring(i, j), ring(i + 1, j + 1), ring(i, j + 1)});
    }
  }
  orient_outward(v, f, {0, 0, 0});
  return Mesh(std::move(v), std::move(f));
}

namespace {
struct CubeLattice {
  int n;
  std::map<std::array<int, 3>, VertexIndex> index;
  std::vector<Vec3> vertices;

  VertexIndex at(int i, int j, int k) {
    auto [it, inserted] = index.emplace(std::array<int, 3>{i, j, k}, static_cast<VertexIndex>(vertices.size()));
    if (inserted) vertices.push_back({double(i) / n, double(j) / n, double(k) / n});
    return it->second;
  }
};
}  // namespace

Mesh subdivided_cube(int n) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("subdivided_cube needs an even n >= 2");
  CubeLattice lattice{n, {}, {}};
  std::vector<Triangle> f;
  // Each face: fixed axis `axis` at value `side`, free axes u and v.
  for (int axis = 0; axis < 3; ++axis) {
    for (int side : {0, n}) {
      const int u_axis = (axis + 1) % 3, v_axis = (axis + 2) % 3;
      auto vid = [&](int a, int b) {
        std::array<int, 3> c{};
        c[axis] = side;
        c[u_axis] = a;
        c[v_axis] = b;
        return lattice.at(c[0], c[1], c[2]);
      };
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
          const VertexIndex p00 = vid(a, b), p10 = vid(a + 1, b), p11 = vid(a + 1, b + 1), p01 = vid(a, b + 1);
          const bool low_a = 2 * a + 1 < n, low_b = 2 * b + 1 < n;
          if (low_a == low_b) {
            f.push_back({p00, p10, p11});
            f.push_back({p00, p11, p01});
          } else {
            f.push_back({p10, p11, p01});
            f.push_back({p10, p01, p00});
          }
        }
      }
    }
  }
  auto v = std::move(lattice.vertices);
  orient_outward(v, f, {0.5, 0.5, 0.5});
  return Mesh(std::move(v), std::move(f));
}

VertexIndex cube_vertex(int n, int i, int j, int k) {
  // Replays the enumeration order of subdivided_cube(); cheap for test-sized n.
  CubeLattice lattice{n, {}, {}};
  for (int axis = 0; axis < 3; ++axis) {
    for (int side : {0, n}) {
      const int u_axis = (axis + 1) % 3, v_axis = (axis + 2) % 3;
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
          for (auto [da, db] : {std::pair{0, 0}, {1, 0}, {1, 1}, {0, 1}}) {
            std::array<int, 3> c{};
            c[axis] = side;
            c[u_axis] = a + da;
            c[v_axis] = b + db;
            lattice.at(c[0], c[1], c[2]);
          }
        }
      }
    }
  }
  auto it = lattice.index.find({i, j, k});
  if (it == lattice.index.end()) throw std::invalid_argument("not a cube surface lattice point");
  return it->second;
}

Wedge wedge() {
  // Floor strip in z = 0 (y in [0,1]) and wall strip in y = 0 (z in [0,1]),
  // sharing the crease x in {0,1,2}, y = z = 0.
  std::vector<Vec3> v{{0, 0, 0}, {1, 0, 0}, {2, 0, 0},   // crease 0..2
                      {0, 1, 0}, {1, 1, 0}, {2, 1, 0},   // floor 3..5
                      {0, 0, 1}, {1, 0, 1}, {2, 0, 1}};  // wall 6..8
  std::vector<Triangle> f{{0, 1, 4}, {0, 4, 3}, {1, 2, 5}, {1, 5, 4},
                          {0, 7, 1}, {0, 6, 7}, {1, 8, 2}, {1, 7, 8}};
  orient_outward(v, f, {1, 1, 1});
  return {Mesh(std::move(v), std::move(f)), 1};
}

Mesh line_strip(int count) {
  std::vector<Vec3> v;
  for (int i = 0; i < count; ++i) v.push_back({double(i), 0, 0});
  for (int i = 0; i < count; ++i) v.push_back({double(i), 1000, 0});
  std::vector<Triangle> f;
  for (int i = 0; i + 1 < count; ++i) {
    const auto a = static_cast<VertexIndex>(i), b = static_cast<VertexIndex>(i + 1);
    const auto c = static_cast<VertexIndex>(count + i), d = static_cast<VertexIndex>(count + i + 1);
    f.push_back({a, b, d});
    f.push_back({a, d, c});
  }
  return Mesh(std::move(v), std::move(f));
}

Mesh bumpy_sphere(int levels) {
  Mesh s = icosphere(levels);
  std::vector<Vec3> v(s.vertices().begin(), s.vertices().end());
  for (auto& p : v) {
    const double r = 1.0 + 0.25 * std::pow(std::max(0.0, p.x), 8) + 0.2 * std::pow(std::max(0.0, -p.y), 6) +
                     0.15 * std::pow(std::max(0.0, p.z), 10) + 0.05 * std::sin(2 * p.x + 1) * std::cos(3 * p.y);
    p = r * p;
  }
  return s.with_positions(std::move(v));
}

std::vector<SalientModel> salient_corpus() {
  std::vector<SalientModel> out;
  {
    const int n = 16;
    SalientModel cube{"cube", subdivided_cube(n), {}};
    for (int i : {0, n})
      for (int j : {0, n})
        for (int k : {0, n}) cube.ground_truth.push_back(cube_vertex(n, i, j, k));
    std::sort(cube.ground_truth.begin(), cube.ground_truth.end());
    out.push_back(std::move(cube));
  }
  const Mesh sphere = icosphere(4);
  for (int seed = 1; seed <= 6; ++seed) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> height(0.15, 0.45), width(0.12, 0.3), wave(-1, 1);
    const int count = 3 + seed % 4;
    std::vector<Vec3> dirs;
    while (static_cast<int>(dirs.size()) < count) {
      const Vec3 d = unit({gauss(rng), gauss(rng), gauss(rng)});
      bool apart = true;
      for (const auto& e : dirs) apart = apart && dot(d, e) < std::cos(0.9);
      if (apart) dirs.push_back(d);
    }
    std::vector<double> h(count), w(count);
    for (int b = 0; b < count; ++b) h[b] = height(rng), w[b] = width(rng);
    const Vec3 k{wave(rng), wave(rng), wave(rng)};
    std::vector<Vec3> v(sphere.vertices().begin(), sphere.vertices().end());
    for (auto& p : v) {
      double r = 1 + 0.03 * std::sin(3 * dot(k, p) + seed);
      for (int b = 0; b < count; ++b) {
        const double a = std::acos(std::clamp(dot(p, dirs[b]), -1.0, 1.0));
        r += h[b] * std::exp(-a * a / (2 * w[b] * w[b]));
      }
      p = r * p;
    }
    SalientModel m{"bumps" + std::to_string(seed), sphere.with_positions(v), {}};
    for (const auto& d : dirs) {
      VertexIndex best = 0;
      for (VertexIndex i = 0; i < sphere.vertex_count(); ++i) {
        if (dot(sphere.position(i), d) > dot(sphere.position(best), d)) best = i;
      }
      m.ground_truth.push_back(best);
    }
    std::sort(m.ground_truth.begin(), m.ground_truth.end());
    out.push_back(std::move(m));
  }
  return out;
}

Vec3 RigidMotion::apply(const Vec3& p) const {
  return {r[0][0] * p.x + r[0][1] * p.y + r[0][2] * p.z + t.x, r[1][0] * p.x + r[1][1] * p.y + r[1][2] * p.z + t.y,
          r[2][0] * p.x + r[2][1] * p.y + r[2][2] * p.z + t.z};
}

RigidMotion random_rigid_motion(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  double q[4];
  double len = 0;
  for (double& c : q) {
    c = gauss(rng);
    len += c * c;
  }
  len = std::sqrt(len);
  for (double& c : q) c /= len;
  const double w = q[0], x = q[1], y = q[2], z = q[3];
  RigidMotion m{{{1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)},
                 {2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)},
                 {2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)}},
                {}};
  std::uniform_real_distribution<double> shift(-5, 5);
  m.t = {shift(rng), shift(rng), shift(rng)};
  return m;
}

Mesh transformed(const Mesh& mesh, const RigidMotion& motion) {
  std::vector<Vec3> v;
  for (const auto& p : mesh.vertices()) v.push_back(motion.apply(p));
  return mesh.with_positions(std::move(v));
}

Mesh scaled(const Mesh& mesh, double factor) {
  std::vector<Vec3> v;
  for (const auto& p : mesh.vertices()) v.push_back(factor * p);
  return mesh.with_positions(std::move(v));
}

Mesh translated(const Mesh& mesh, const Vec3& offset) {
  std::vector<Vec3> v;
  for (const auto& p : mesh.vertices()) v.push_back(p + offset);
  return mesh.with_positions(std::move(v));
}

}  // namespace gmsr::testing
