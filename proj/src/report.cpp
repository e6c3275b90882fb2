#include "gmsr/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace gmsr {

namespace {

using nlohmann::json;

json config_object(const DetectorConfig& config) {
  return json{{"rings", config.rings},
              {"alpha", config.alpha},
              {"nms_rings", config.nms_rings},
              {"beta", config.beta},
              {"scales", config.scales},
              {"distance_weight", config.distance_weight}};
}

json point_list(const std::vector<Candidate>& points) {
  json list = json::array();
  for (const auto& p : points) list.push_back({{"vertex", p.vertex}, {"rho", p.rho}});
  return list;
}

}  // namespace

std::string config_json(const DetectorConfig& config) { return config_object(config).dump(); }

std::string detection_json(const std::string& model, const DetectorConfig& config, const Mesh& mesh,
                           const Detection& detection) {
  json doc{{"model", model},
           {"config", config_object(config)},
           {"vertex_count", mesh.vertex_count()},
           {"base_scale", detection.base_scale},
           {"candidate_count", detection.candidates.size()},
           {"points", point_list(detection.points)}};
  return doc.dump(2) + "\n";
}

DetectionFile parse_detection_json(const std::string& text) {
  DetectionFile out;
  try {
    const json doc = json::parse(text);
    out.model = doc.value("model", std::string{});
    for (const auto& p : doc.at("points")) out.vertices.push_back(p.at("vertex").get<VertexIndex>());
  } catch (const json::exception& e) {
    throw Error(Error::Kind::Parse, std::string("detection file: ") + e.what());
  }
  return out;
}

DetectionFile load_detection_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Error::Kind::Io, "cannot open detection file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_detection_json(buf.str());
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.what());
  }
}

Rgb saliency_color(double t) {
  static constexpr std::array<std::array<double, 3>, 5> stops{{
      {0, 0, 255},    // blue
      {0, 255, 255},  // cyan
      {0, 255, 0},    // green
      {255, 255, 0},  // yellow
      {255, 0, 0},    // red
  }};
  if (!(t > 0)) t = 0;  // also maps NaN to the cold end
  t = std::min(t, 1.0);
  const double pos = t * 4.0;
  const std::size_t seg = std::min<std::size_t>(3, static_cast<std::size_t>(pos));
  const double f = pos - static_cast<double>(seg);
  Rgb rgb{};
  for (int c = 0; c < 3; ++c) {
    const double v = stops[seg][c] + f * (stops[seg + 1][c] - stops[seg][c]);
    rgb[c] = static_cast<std::uint8_t>(std::lround(v));
  }
  return rgb;
}

void write_saliency_ply(std::ostream& out, const Mesh& mesh, const std::vector<double>& rho) {
  if (rho.size() != mesh.vertex_count()) throw Error(Error::Kind::InvalidArgument, "response field size mismatch");
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double r : rho) {
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  const double range = hi - lo;
  out << "ply\nformat ascii 1.0\n"
      << "comment per-vertex colour: normalised multi-scale interest response\n"
      << "element vertex " << mesh.vertex_count() << "\n"
      << "property double x\nproperty double y\nproperty double z\n"
      << "property uchar red\nproperty uchar green\nproperty uchar blue\n"
      << "element face " << mesh.face_count() << "\n"
      << "property list uchar int vertex_indices\nend_header\n";
  out << std::setprecision(17);
  for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
    const auto& p = mesh.position(static_cast<VertexIndex>(v));
    const double t = range > 0 ? (rho[v] - lo) / range : 0.0;
    const auto c = saliency_color(t);
    out << p.x << ' ' << p.y << ' ' << p.z << ' ' << int(c[0]) << ' ' << int(c[1]) << ' ' << int(c[2]) << '\n';
  }
  for (const auto& t : mesh.faces()) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

std::string saliency_sidecar_json(const std::string& model, const DetectorConfig& config, const Detection& detection) {
  json doc{{"model", model},
           {"config", config_object(config)},
           {"candidates", point_list(detection.candidates)},
           {"points", point_list(detection.points)}};
  return doc.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Error::Kind::Io, "cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw Error(Error::Kind::Io, "write to '" + path + "' failed");
}

}  // namespace gmsr
