#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gmsr/detector.hpp"

namespace gmsr {

// Detection file: model id, config echo and the final points.
//   {"model": ..., "config": {...}, "vertex_count": V, "base_scale": e,
//    "candidate_count": C, "points": [{"vertex": i, "rho": r}, ...]}
std::string detection_json(const std::string& model, const DetectorConfig& config, const Mesh& mesh,
                           const Detection& detection);

struct DetectionFile {
  std::string model;
  std::vector<VertexIndex> vertices;
};
DetectionFile parse_detection_json(const std::string& text);
DetectionFile load_detection_json(const std::string& path);

std::string config_json(const DetectorConfig& config);

using Rgb = std::array<std::uint8_t, 3>;

// Colour ramp for t in [0, 1]: blue, cyan, green, yellow, red at t = 0, .25,
// .5, .75, 1 with linear blending; channels rounded to nearest. t is clamped.
Rgb saliency_color(double t);

// ASCII PLY with per-vertex colours from the min-max normalised response.
// A constant field is drawn entirely at t = 0.
void write_saliency_ply(std::ostream& out, const Mesh& mesh, const std::vector<double>& rho);

// Sidecar listing candidates and final points.
std::string saliency_sidecar_json(const std::string& model, const DetectorConfig& config, const Detection& detection);

// Writes `text` to `path`, throwing Error::Kind::Io on failure.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace gmsr
