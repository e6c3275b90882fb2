// gmsr: command-line front end over the C API.
//
//   gmsr detect MESH --out points.json
//   gmsr export-saliency MESH --out map.ply [--sidecar points.json]
//   gmsr evaluate --detections DIR --ground-truth FILE --meshes DIR --out DIR
//   gmsr sweep --meshes DIR --ground-truth FILE --param rings --values 1:10 --out sweep.csv
//
// Exit codes: 0 success, 1 usage error, 2 data or I/O error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gmsr/gmsr.h"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigFlags {
  int rings = 6;
  double alpha = 2.5;
  int nms_rings = 10;
  double beta = 0.03;
  std::string scales = "1,3,5";
  double distance_weight = 1.0;

  void attach(CLI::App& app) {
    gmsr_config d;
    gmsr_config_default(&d);
    rings = d.rings;
    alpha = d.alpha;
    nms_rings = d.nms_rings;
    beta = d.beta;
    distance_weight = d.distance_weight;
    app.add_option("--rings", rings, "Rings K per geometric measure")->capture_default_str();
    app.add_option("--alpha", alpha, "Weight of the normal-angle measure")->capture_default_str();
    app.add_option("--nms-rings", nms_rings, "Rings N for non-maxima suppression")->capture_default_str();
    app.add_option("--beta", beta, "l0 refinement penalty")->capture_default_str();
    app.add_option("--scales", scales, "Comma-separated scale multipliers")->capture_default_str();
    app.add_option("--distance-weight", distance_weight, "Weight of the distance measure (0 = angle only)")
        ->capture_default_str();
  }

  gmsr_config build() const;
};

// "a,b,c" or "start:stop[:step]" (inclusive). Range values are rounded to
// 1e-9 so that 0.005:0.12:0.005 lands exactly on the grid.
std::vector<double> parse_values(const std::string& text) {
  std::vector<double> out;
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw UsageError("invalid number '" + s + "' in '" + text + "'");
    return v;
  };
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() < 2 || parts.size() > 3) throw UsageError("range must be start:stop[:step], got '" + text + "'");
    const double start = number(parts[0]), stop = number(parts[1]);
    const double step = parts.size() == 3 ? number(parts[2]) : 1.0;
    if (!(step > 0) || stop < start) throw UsageError("empty or invalid range '" + text + "'");
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (long i = 0; i < count; ++i) out.push_back(std::round((start + i * step) * 1e9) / 1e9);
  } else {
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ',');) {
      if (!p.empty()) out.push_back(number(p));
    }
  }
  if (out.empty()) throw UsageError("no values in '" + text + "'");
  return out;
}

std::vector<int> parse_ints(const std::string& text) {
  std::vector<int> out;
  for (double v : parse_values(text)) {
    if (v != std::floor(v)) throw UsageError("expected integers in '" + text + "'");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

gmsr_config ConfigFlags::build() const {
  gmsr_config c;
  gmsr_config_default(&c);
  c.rings = rings;
  c.alpha = alpha;
  c.nms_rings = nms_rings;
  c.beta = beta;
  c.distance_weight = distance_weight;
  const auto s = parse_ints(scales);
  if (s.size() > GMSR_MAX_SCALES) throw UsageError("too many scales");
  c.scale_count = s.size();
  for (std::size_t i = 0; i < s.size(); ++i) c.scales[i] = s[i];
  return c;
}

struct GridFlags {
  std::string subjects = "2:23";
  std::string sigmas = "0.01:0.1:0.01";
  std::string tolerances = "0.005:0.12:0.005";

  void attach(CLI::App& app) {
    app.add_option("--grid-n", subjects, "Subject counts n (list or range)")->capture_default_str();
    app.add_option("--grid-sigma", sigmas, "Region radii sigma (list or range)")->capture_default_str();
    app.add_option("--grid-r", tolerances, "Localisation tolerances r (list or range)")->capture_default_str();
  }
};

// Owns the arrays a gmsr_grid points into.
struct Grid {
  std::vector<int> n;
  std::vector<double> sigma, r;
  gmsr_grid view{};

  explicit Grid(const GridFlags& f) : n(parse_ints(f.subjects)), sigma(parse_values(f.sigmas)), r(parse_values(f.tolerances)) {
    view = {n.data(), n.size(), sigma.data(), sigma.size(), r.data(), r.size()};
  }
};

struct MeshDeleter {
  void operator()(gmsr_mesh* m) const { gmsr_mesh_free(m); }
};
struct DetectionDeleter {
  void operator()(gmsr_detection* d) const { gmsr_detection_free(d); }
};
struct ReportDeleter {
  void operator()(gmsr_report* r) const { gmsr_report_free(r); }
};

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(gmsr_status status) {
  if (status == GMSR_OK) return;
  if (status == GMSR_ERR_INVALID_ARGUMENT) throw UsageError(gmsr_last_error());
  throw DataError(gmsr_last_error());
}

std::unique_ptr<gmsr_mesh, MeshDeleter> load(const std::string& path) {
  gmsr_mesh* mesh = nullptr;
  const auto status = gmsr_mesh_load(path.c_str(), &mesh);
  // An unreadable or malformed mesh is a data error even when reported as an argument problem.
  if (status != GMSR_OK) throw DataError(gmsr_last_error());
  std::unique_ptr<gmsr_mesh, MeshDeleter> owned(mesh);
  if (const auto bad = gmsr_mesh_inconsistent_windings(mesh); bad > 0) {
    std::cerr << "warning: " << path << ": " << bad << " edges with inconsistent face winding\n";
  }
  return owned;
}

std::unique_ptr<gmsr_detection, DetectionDeleter> run_detect(const gmsr_mesh* mesh, const gmsr_config& config) {
  gmsr_detection* det = nullptr;
  check(gmsr_detect(mesh, &config, &det));
  return std::unique_ptr<gmsr_detection, DetectionDeleter>(det);
}

std::string stem(const std::string& path) { return std::filesystem::path(path).stem().string(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mesh interest point detection and benchmark evaluation"};
  app.require_subcommand(1);

  std::string mesh_path, out_path, model_id, sidecar;
  ConfigFlags detect_flags, export_flags, sweep_flags;

  auto* detect = app.add_subcommand("detect", "Detect interest points and write them as JSON");
  detect->add_option("mesh", mesh_path, "Input mesh (.off or .obj)")->required();
  detect->add_option("--out", out_path, "Output JSON path")->required();
  detect->add_option("--model", model_id, "Model id recorded in the output (default: file stem)");
  detect_flags.attach(*detect);

  auto* exp = app.add_subcommand("export-saliency", "Write the response map as a coloured PLY");
  exp->add_option("mesh", mesh_path, "Input mesh (.off or .obj)")->required();
  exp->add_option("--out", out_path, "Output PLY path")->required();
  exp->add_option("--sidecar", sidecar, "Candidate/point JSON (default: <out>.json)");
  exp->add_option("--model", model_id, "Model id (default: file stem)");
  export_flags.attach(*exp);

  std::string detections_dir, gt_path, mesh_dir;
  GridFlags eval_grid, sweep_grid;
  auto* evaluate = app.add_subcommand("evaluate", "Score detections against ground truth");
  evaluate->add_option("--detections", detections_dir, "Directory of <model>.json detection files")->required();
  evaluate->add_option("--ground-truth", gt_path, "Ground-truth file")->required();
  evaluate->add_option("--meshes", mesh_dir, "Directory of <model>.off|.obj meshes")->required();
  evaluate->add_option("--out", out_path, "Output directory for cells.csv and summary.json")->required();
  eval_grid.attach(*evaluate);

  std::string parameter, values;
  auto* sweep = app.add_subcommand("sweep", "Average IOU/F1 as one parameter varies");
  sweep->add_option("--meshes", mesh_dir, "Directory of <model>.off|.obj meshes")->required();
  sweep->add_option("--ground-truth", gt_path, "Ground-truth file")->required();
  sweep->add_option("--param", parameter, "rings | alpha | nms-rings | beta | distance-weight")->required();
  sweep->add_option("--values", values, "Values (list or range)")->required();
  sweep->add_option("--out", out_path, "Output CSV path")->required();
  sweep_flags.attach(*sweep);
  sweep_grid.attach(*sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*detect) {
      const auto config = detect_flags.build();
      auto mesh = load(mesh_path);
      auto det = run_detect(mesh.get(), config);
      const std::string id = model_id.empty() ? stem(mesh_path) : model_id;
      check(gmsr_detection_write_json(det.get(), id.c_str(), out_path.c_str()));
      std::cerr << id << ": " << gmsr_detection_candidate_count(det.get()) << " candidates, "
                << gmsr_detection_point_count(det.get()) << " interest points\n";
    } else if (*exp) {
      const auto config = export_flags.build();
      auto mesh = load(mesh_path);
      auto det = run_detect(mesh.get(), config);
      const std::string id = model_id.empty() ? stem(mesh_path) : model_id;
      if (sidecar.empty()) sidecar = std::filesystem::path(out_path).replace_extension(".json").string();
      check(gmsr_detection_write_saliency(det.get(), id.c_str(), out_path.c_str(), sidecar.c_str()));
    } else if (*evaluate) {
      const Grid grid(eval_grid);
      gmsr_report* raw = nullptr;
      check(gmsr_evaluate(detections_dir.c_str(), gt_path.c_str(), mesh_dir.c_str(), &grid.view, &raw));
      std::unique_ptr<gmsr_report, ReportDeleter> report(raw);
      std::error_code ec;
      std::filesystem::create_directories(out_path, ec);
      if (ec) throw DataError("cannot create output directory '" + out_path + "': " + ec.message());
      const auto dir = std::filesystem::path(out_path);
      check(gmsr_report_write_csv(report.get(), (dir / "cells.csv").string().c_str()));
      check(gmsr_report_write_summary(report.get(), (dir / "summary.json").string().c_str()));
      for (std::size_t i = 0; i < gmsr_report_warning_count(report.get()); ++i) {
        std::cerr << "warning: " << gmsr_report_warning(report.get(), i) << '\n';
      }
      gmsr_summary s;
      gmsr_report_summary(report.get(), &s);
      std::printf("average IOU %.4f  average F1 %.4f  (%zu cells, %zu defined, %zu models skipped)\n",
                  s.average_iou, s.average_f1, s.cells, s.defined_cells, s.skipped_models);
    } else if (*sweep) {
      const Grid grid(sweep_grid);
      const auto config = sweep_flags.build();
      const auto v = parse_values(values);
      check(gmsr_sweep(mesh_dir.c_str(), gt_path.c_str(), &grid.view, &config, parameter.c_str(), v.data(), v.size(),
                       out_path.c_str()));
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return 0;
}
