#include "gmsr/mesh.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>

namespace gmsr {

namespace {

[[noreturn]] void parse_error(std::size_t line, const std::string& msg) {
  throw Error(Error::Kind::Parse, "line " + std::to_string(line) + ": " + msg);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

bool to_double(std::string_view tok, double& out) {
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && p == tok.data() + tok.size() && std::isfinite(out);
}

template <typename Int>
bool to_int(std::string_view tok, Int& out) {
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && p == tok.data() + tok.size();
}

struct DataLine {
  std::size_t number;
  std::vector<std::string_view> tokens;
};

// Strips '#' comments and blank lines; keeps the text alive in `storage`.
std::vector<DataLine> data_lines(std::istream& in, std::vector<std::string>& storage) {
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    storage.push_back(std::move(line));
  }
  std::vector<DataLine> out;
  for (std::size_t i = 0; i < storage.size(); ++i) {
    auto toks = split_ws(storage[i]);
    if (!toks.empty()) out.push_back({i + 1, std::move(toks)});
  }
  return out;
}

bool looks_like_face(const DataLine& line) {
  long n = 0;
  if (!to_int(line.tokens[0], n) || n < 1) return false;
  if (line.tokens.size() < static_cast<std::size_t>(n) + 1) return false;
  for (long i = 1; i <= n; ++i) {
    long idx = 0;
    if (!to_int(line.tokens[i], idx)) return false;
  }
  return true;
}

}  // namespace

Mesh::Mesh(std::vector<Vec3> vertices, std::vector<Triangle> faces)
    : vertices_(std::move(vertices)), faces_(std::move(faces)) {
  const std::size_t n = vertices_.size();
  if (n > std::numeric_limits<VertexIndex>::max()) {
    throw Error(Error::Kind::InvalidArgument, "too many vertices");
  }
  std::vector<std::vector<VertexIndex>> adj(n);
  for (std::size_t f = 0; f < faces_.size(); ++f) {
    const auto& t = faces_[f];
    for (VertexIndex v : t) {
      if (v >= n) {
        throw Error(Error::Kind::InvalidArgument,
                    "face " + std::to_string(f) + ": vertex index " + std::to_string(v) + " out of range");
      }
    }
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
      throw Error(Error::Kind::InvalidArgument, "face " + std::to_string(f) + ": repeated vertex index");
    }
    for (int e = 0; e < 3; ++e) {
      adj[t[e]].push_back(t[(e + 1) % 3]);
      adj[t[(e + 1) % 3]].push_back(t[e]);
    }
  }
  adjacency_offsets_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) {
    auto& a = adj[v];
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    adjacency_offsets_[v + 1] = adjacency_offsets_[v] + a.size();
  }
  adjacency_.reserve(adjacency_offsets_[n]);
  for (const auto& a : adj) adjacency_.insert(adjacency_.end(), a.begin(), a.end());
}

Mesh Mesh::with_positions(std::vector<Vec3> positions) const {
  if (positions.size() != vertices_.size()) {
    throw Error(Error::Kind::InvalidArgument, "position count does not match vertex count");
  }
  Mesh out;
  out.vertices_ = std::move(positions);
  out.faces_ = faces_;
  out.adjacency_offsets_ = adjacency_offsets_;
  out.adjacency_ = adjacency_;
  return out;
}

Mesh parse_off(std::istream& in) {
  std::vector<std::string> storage;
  const auto lines = data_lines(in, storage);
  if (lines.empty()) parse_error(1, "missing OFF header");

  // Header is "OFF" optionally followed on the same line by the counts.
  std::size_t cursor = 0;
  std::vector<std::string_view> counts;
  const auto& head = lines[0];
  if (head.tokens[0] != "OFF") parse_error(head.number, "malformed header: expected 'OFF'");
  if (head.tokens.size() > 1) {
    counts.assign(head.tokens.begin() + 1, head.tokens.end());
    cursor = 1;
  } else {
    if (lines.size() < 2) parse_error(head.number, "malformed header: missing counts");
    counts = lines[1].tokens;
    cursor = 2;
  }
  const std::size_t counts_line = cursor == 1 ? head.number : lines[1].number;
  std::size_t nv = 0, nf = 0;
  if (counts.size() < 2 || !to_int(counts[0], nv) || !to_int(counts[1], nf)) {
    parse_error(counts_line, "malformed header: expected vertex and face counts");
  }

  const std::size_t available = lines.size() - cursor;
  if (available < nv + nf) {
    const bool vertices_short =
        available < nv || (nv > 0 && looks_like_face(lines[cursor + nv - 1]));
    const std::size_t at = lines.back().number;
    parse_error(at, vertices_short ? "vertex count mismatch: declared " + std::to_string(nv) + " vertices"
                                   : "face count mismatch: declared " + std::to_string(nf) + " faces");
  }

  std::vector<Vec3> vertices;
  vertices.reserve(nv);
  for (std::size_t i = 0; i < nv; ++i) {
    const auto& l = lines[cursor + i];
    Vec3 p;
    if (l.tokens.size() < 3 || !to_double(l.tokens[0], p.x) || !to_double(l.tokens[1], p.y) ||
        !to_double(l.tokens[2], p.z)) {
      parse_error(l.number, "malformed vertex record");
    }
    vertices.push_back(p);
  }
  cursor += nv;

  std::vector<Triangle> faces;
  faces.reserve(nf);
  for (std::size_t i = 0; i < nf; ++i) {
    const auto& l = lines[cursor + i];
    long n = 0;
    if (!to_int(l.tokens[0], n)) parse_error(l.number, "malformed face record");
    if (n != 3) parse_error(l.number, "non-triangular face");
    if (l.tokens.size() < 4) parse_error(l.number, "malformed face record");
    Triangle t{};
    for (int k = 0; k < 3; ++k) {
      long idx = 0;
      if (!to_int(l.tokens[k + 1], idx)) parse_error(l.number, "malformed face index");
      if (idx < 0 || static_cast<std::size_t>(idx) >= nv) parse_error(l.number, "face index out of range");
      t[k] = static_cast<VertexIndex>(idx);
    }
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) parse_error(l.number, "degenerate face (repeated index)");
    faces.push_back(t);
  }
  cursor += nf;
  if (cursor < lines.size()) {
    parse_error(lines[cursor].number, "trailing data after declared vertex and face counts");
  }
  return Mesh(std::move(vertices), std::move(faces));
}

Mesh parse_off(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_off(in);
}

Mesh parse_obj(std::istream& in) {
  std::vector<std::string> storage;
  const auto lines = data_lines(in, storage);
  std::vector<Vec3> vertices;
  std::vector<Triangle> faces;

  for (const auto& l : lines) {
    const auto& tag = l.tokens[0];
    if (tag == "v") {
      Vec3 p;
      if (l.tokens.size() < 4 || !to_double(l.tokens[1], p.x) || !to_double(l.tokens[2], p.y) ||
          !to_double(l.tokens[3], p.z)) {
        parse_error(l.number, "malformed vertex record");
      }
      vertices.push_back(p);
    } else if (tag == "f") {
      if (l.tokens.size() != 4) parse_error(l.number, "non-triangular face");
      Triangle t{};
      for (int k = 0; k < 3; ++k) {
        auto tok = l.tokens[k + 1];
        tok = tok.substr(0, tok.find('/'));
        long idx = 0;
        if (!to_int(tok, idx) || idx == 0) parse_error(l.number, "malformed face index");
        // Negative indices count back from the most recent vertex.
        const long resolved = idx > 0 ? idx - 1 : static_cast<long>(vertices.size()) + idx;
        if (resolved < 0 || static_cast<std::size_t>(resolved) >= vertices.size()) {
          parse_error(l.number, "face index out of range");
        }
        t[k] = static_cast<VertexIndex>(resolved);
      }
      if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) parse_error(l.number, "degenerate face (repeated index)");
      faces.push_back(t);
    }
    // vn, vt, g, o, s, usemtl, mtllib, ... are ignored.
  }
  return Mesh(std::move(vertices), std::move(faces));
}

Mesh parse_obj(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_obj(in);
}

Mesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Error::Kind::Io, "cannot open mesh file '" + path + "'");
  std::string ext = path.substr(path.find_last_of('.') == std::string::npos ? path.size() : path.find_last_of('.'));
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  try {
    if (ext == ".off") return parse_off(in);
    if (ext == ".obj") return parse_obj(in);
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.what());
  }
  throw Error(Error::Kind::InvalidArgument, "unsupported mesh extension '" + ext + "' (expected .off or .obj)");
}

void write_off(std::ostream& out, const Mesh& mesh) {
  out << "OFF\n" << mesh.vertex_count() << ' ' << mesh.face_count() << " 0\n";
  out << std::setprecision(17);
  for (const auto& p : mesh.vertices()) out << p.x << ' ' << p.y << ' ' << p.z << '\n';
  for (const auto& t : mesh.faces()) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

std::string write_off(const Mesh& mesh) {
  std::ostringstream out;
  write_off(out, mesh);
  return out.str();
}

NormalField compute_vertex_normals(const Mesh& mesh) {
  NormalField field;
  const std::size_t n = mesh.vertex_count();
  std::vector<Vec3> sum(n);
  for (const auto& t : mesh.faces()) {
    const Vec3 a = mesh.position(t[0]);
    // |cross| is twice the triangle area, which gives the area weighting.
    const Vec3 fn = cross(mesh.position(t[1]) - a, mesh.position(t[2]) - a);
    for (VertexIndex v : t) sum[v] += fn;
  }
  field.normals.resize(n);
  field.valid.assign(n, false);
  for (std::size_t v = 0; v < n; ++v) {
    const double len = norm(sum[v]);
    if (len > 0 && std::isfinite(len)) {
      field.normals[v] = (1.0 / len) * sum[v];
      field.valid[v] = true;
    } else {
      field.degenerate.push_back(static_cast<VertexIndex>(v));
    }
  }
  return field;
}

std::size_t count_inconsistent_windings(const Mesh& mesh) {
  std::map<std::pair<VertexIndex, VertexIndex>, int> directed;
  for (const auto& t : mesh.faces()) {
    for (int e = 0; e < 3; ++e) ++directed[{t[e], t[(e + 1) % 3]}];
  }
  std::size_t bad = 0;
  for (const auto& [edge, count] : directed) {
    if (count > 1) bad += count - 1;
  }
  return bad;
}

RingNeighborhoods::RingNeighborhoods(const Mesh& mesh, int ring_count) : ring_count_(ring_count) {
  build(mesh.vertex_count(), [&](VertexIndex v) { return mesh.neighbors(v); });
}

RingNeighborhoods::RingNeighborhoods(const std::vector<std::vector<VertexIndex>>& adjacency, int ring_count)
    : ring_count_(ring_count) {
  for (const auto& list : adjacency) {
    for (VertexIndex w : list) {
      if (w >= adjacency.size()) throw Error(Error::Kind::InvalidArgument, "adjacency index out of range");
    }
  }
  build(adjacency.size(), [&](VertexIndex v) { return std::span<const VertexIndex>(adjacency[v]); });
}

template <typename Neighbors>
void RingNeighborhoods::build(std::size_t n, Neighbors&& neighbors) {
  if (ring_count_ < 1) throw Error(Error::Kind::InvalidArgument, "ring count must be >= 1");
  ring_offsets_.reserve(n * ring_count_);
  // Stamp of the last BFS that visited each vertex; avoids clearing per source.
  std::vector<std::size_t> seen(n, std::numeric_limits<std::size_t>::max());
  std::vector<VertexIndex> frontier, next;
  for (std::size_t src = 0; src < n; ++src) {
    seen[src] = src;
    frontier.assign(1, static_cast<VertexIndex>(src));
    for (int k = 1; k <= ring_count_; ++k) {
      ring_offsets_.push_back(members_.size());
      next.clear();
      for (VertexIndex u : frontier) {
        for (VertexIndex w : neighbors(u)) {
          if (seen[w] != src) {
            seen[w] = src;
            next.push_back(w);
          }
        }
      }
      std::sort(next.begin(), next.end());
      members_.insert(members_.end(), next.begin(), next.end());
      std::swap(frontier, next);
    }
  }
}

RingNeighborhoods k_rings(const Mesh& mesh, int ring_count) { return RingNeighborhoods(mesh, ring_count); }

double bbox_diagonal(const Mesh& mesh) {
  if (mesh.vertex_count() == 0) throw Error(Error::Kind::InvalidArgument, "bounding box of an empty mesh");
  Vec3 lo = mesh.position(0), hi = lo;
  for (const auto& p : mesh.vertices()) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
  }
  return norm(hi - lo);
}

}  // namespace gmsr
