#include "gmsr/eval.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <queue>
#include <set>
#include <sstream>

namespace gmsr {

std::vector<double> geodesic_distances(const Mesh& mesh, VertexIndex source, double cutoff) {
  if (source >= mesh.vertex_count()) {
    throw Error(Error::Kind::InvalidArgument, "geodesic source " + std::to_string(source) + " out of range");
  }
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(mesh.vertex_count(), inf);
  using Item = std::pair<double, VertexIndex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist[source] = 0;
  queue.push({0.0, source});
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (d > dist[u]) continue;
    for (VertexIndex w : mesh.neighbors(u)) {
      const double nd = d + norm(mesh.position(w) - mesh.position(u));
      if (nd < dist[w] && nd <= cutoff) {
        dist[w] = nd;
        queue.push({nd, w});
      }
    }
  }
  return dist;
}

Mesh normalized_to_unit_diagonal(const Mesh& mesh) {
  const double diag = bbox_diagonal(mesh);
  if (!(diag > 0)) throw Error(Error::Kind::Data, "cannot normalise a mesh with zero extent");
  std::vector<Vec3> pos(mesh.vertices().begin(), mesh.vertices().end());
  for (auto& p : pos) p = (1.0 / diag) * p;
  return mesh.with_positions(std::move(pos));
}

DetectionNeighborhoods::DetectionNeighborhoods(const Mesh& mesh, std::span<const VertexIndex> detected,
                                               double max_tolerance)
    : vertex_count_(mesh.vertex_count()), max_tolerance_(max_tolerance), detected_(detected.begin(), detected.end()) {
  if (!(max_tolerance >= 0)) throw Error(Error::Kind::InvalidArgument, "tolerance must be >= 0");
  std::sort(detected_.begin(), detected_.end());
  detected_.erase(std::unique(detected_.begin(), detected_.end()), detected_.end());
  balls_.reserve(detected_.size());
  for (VertexIndex a : detected_) {
    const auto dist = geodesic_distances(mesh, a, max_tolerance);
    std::vector<std::pair<VertexIndex, double>> ball;
    for (std::size_t v = 0; v < dist.size(); ++v) {
      if (dist[v] <= max_tolerance) ball.emplace_back(static_cast<VertexIndex>(v), dist[v]);
    }
    balls_.push_back(std::move(ball));
  }
}

MatchResult DetectionNeighborhoods::match(std::span<const VertexIndex> ground_truth, double tolerance) const {
  if (!(tolerance >= 0) || tolerance > max_tolerance_) {
    throw Error(Error::Kind::InvalidArgument, "tolerance outside [0, max_tolerance]");
  }
  std::vector<VertexIndex> gt(ground_truth.begin(), ground_truth.end());
  std::sort(gt.begin(), gt.end());
  gt.erase(std::unique(gt.begin(), gt.end()), gt.end());
  if (!gt.empty() && gt.back() >= vertex_count_) {
    throw Error(Error::Kind::InvalidArgument, "ground-truth vertex " + std::to_string(gt.back()) + " out of range");
  }

  std::set<VertexIndex> certified;
  for (const auto& ball : balls_) {
    // Nearest ground-truth point; ground truth outside the ball is farther
    // than max_tolerance and can never be certified by this detection.
    double best = std::numeric_limits<double>::infinity();
    std::optional<VertexIndex> nearest;
    for (VertexIndex g : gt) {
      auto it = std::lower_bound(ball.begin(), ball.end(), g,
                                 [](const auto& entry, VertexIndex v) { return entry.first < v; });
      if (it == ball.end() || it->first != g) continue;
      if (it->second < best) {
        best = it->second;
        nearest = g;
      }
    }
    if (nearest && best <= tolerance) certified.insert(*nearest);
  }

  MatchResult m;
  m.tolerance = tolerance;
  m.ground_truth_count = gt.size();
  m.detected_count = detected_.size();
  m.true_positives = certified.size();
  m.false_positives = m.detected_count - m.true_positives;
  m.false_negatives = m.ground_truth_count - m.true_positives;
  return m;
}

MatchResult match_points(const Mesh& mesh, std::span<const VertexIndex> ground_truth,
                         std::span<const VertexIndex> detected, double tolerance) {
  for (VertexIndex a : detected) {
    if (a >= mesh.vertex_count()) {
      throw Error(Error::Kind::InvalidArgument, "detected vertex " + std::to_string(a) + " out of range");
    }
  }
  return DetectionNeighborhoods(mesh, detected, tolerance).match(ground_truth, tolerance);
}

std::optional<double> iou(const MatchResult& m) {
  const auto denom = m.true_positives + m.false_positives + m.false_negatives;
  if (denom == 0) return std::nullopt;
  return static_cast<double>(m.true_positives) / static_cast<double>(denom);
}

std::optional<double> f1(const MatchResult& m) {
  const auto denom = 2 * m.true_positives + m.false_positives + m.false_negatives;
  if (denom == 0) return std::nullopt;
  return 2.0 * static_cast<double>(m.true_positives) / static_cast<double>(denom);
}

GroundTruthKey GroundTruthKey::make(std::string model, int subjects, double sigma) {
  return {std::move(model), subjects, static_cast<std::int64_t>(std::llround(sigma * 1e6))};
}

const std::vector<VertexIndex>* GroundTruthSet::find(const std::string& model, int subjects, double sigma) const {
  auto it = entries.find(GroundTruthKey::make(model, subjects, sigma));
  return it == entries.end() ? nullptr : &it->second;
}

std::vector<std::string> GroundTruthSet::models() const {
  std::vector<std::string> out;
  for (const auto& [key, _] : entries) {
    if (out.empty() || out.back() != key.model) out.push_back(key.model);
  }
  return out;
}

GroundTruthLoad parse_ground_truth(std::istream& in, std::span<const std::string> known_models) {
  GroundTruthLoad load;
  std::set<std::string> flagged;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string model;
    if (!(fields >> model)) continue;
    auto fail = [&](const std::string& msg) {
      throw Error(Error::Kind::Parse, "ground truth line " + std::to_string(number) + ": " + msg);
    };
    int subjects = 0;
    double sigma = 0;
    if (!(fields >> subjects) || subjects < 1) fail("expected subject count n >= 1");
    if (!(fields >> sigma) || !(sigma > 0)) fail("expected region radius sigma > 0");
    std::vector<VertexIndex> indices;
    std::string tok;
    while (fields >> tok) {
      long long v = -1;
      std::istringstream parse(tok);
      if (!(parse >> v) || !parse.eof() || v < 0 || v > std::numeric_limits<VertexIndex>::max()) {
        fail("invalid vertex index '" + tok + "'");
      }
      indices.push_back(static_cast<VertexIndex>(v));
    }
    const std::size_t raw = indices.size();
    std::sort(indices.begin(), indices.end());
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
    if (indices.size() != raw) {
      load.warnings.push_back("ground truth line " + std::to_string(number) + ": dropped " +
                              std::to_string(raw - indices.size()) + " duplicate indices");
    }
    if (!known_models.empty() && std::find(known_models.begin(), known_models.end(), model) == known_models.end() &&
        flagged.insert(model).second) {
      load.warnings.push_back("ground truth line " + std::to_string(number) + ": unknown model '" + model + "'");
    }
    auto [it, inserted] = load.set.entries.emplace(GroundTruthKey::make(model, subjects, sigma), std::move(indices));
    if (!inserted) fail("duplicate record for (" + model + ", " + std::to_string(subjects) + ", sigma)");
  }

  // Fewer subjects agreeing is a weaker requirement, so sets must not grow with n.
  std::map<std::pair<std::string, std::int64_t>, std::pair<int, std::size_t>> last;
  for (const auto& [key, indices] : load.set.entries) {
    auto k = std::make_pair(key.model, key.sigma_micros);
    if (auto it = last.find(k); it != last.end() && indices.size() > it->second.second) {
      std::ostringstream msg;
      msg << "ground truth for '" << key.model << "' sigma=" << key.sigma() << ": n=" << key.subjects << " has "
          << indices.size() << " points, more than n=" << it->second.first << " (" << it->second.second << ")";
      load.warnings.push_back(msg.str());
    }
    last[k] = {key.subjects, indices.size()};
  }
  return load;
}

GroundTruthLoad load_ground_truth(const std::string& path, std::span<const std::string> known_models) {
  std::ifstream in(path);
  if (!in) throw Error(Error::Kind::Io, "cannot open ground truth file '" + path + "'");
  return parse_ground_truth(in, known_models);
}

namespace {
std::vector<double> tolerance_grid() {
  std::vector<double> r;
  for (int i = 1; i <= 24; ++i) r.push_back(0.005 * i);
  return r;
}
std::vector<double> sigma_grid() {
  std::vector<double> s;
  for (int i = 1; i <= 10; ++i) s.push_back(0.01 * i);
  return s;
}
std::vector<int> subject_grid(int last) {
  std::vector<int> n;
  for (int i = 2; i <= last; ++i) n.push_back(i);
  return n;
}
}  // namespace

EvaluationGrid EvaluationGrid::dataset_a() { return {subject_grid(23), sigma_grid(), tolerance_grid()}; }
EvaluationGrid EvaluationGrid::dataset_b() { return {subject_grid(16), sigma_grid(), tolerance_grid()}; }

std::vector<CellResult> evaluate_model(const Mesh& mesh, const std::string& model,
                                       std::span<const VertexIndex> detected, const GroundTruthSet& gt,
                                       const EvaluationGrid& grid, std::vector<std::string>& warnings) {
  if (grid.tolerances.empty()) return {};
  for (VertexIndex a : detected) {
    if (a >= mesh.vertex_count()) {
      throw Error(Error::Kind::Data, model + ": detected vertex " + std::to_string(a) + " out of range");
    }
  }
  const Mesh unit = normalized_to_unit_diagonal(mesh);
  const double max_r = *std::max_element(grid.tolerances.begin(), grid.tolerances.end());
  const DetectionNeighborhoods neighborhoods(unit, detected, max_r);

  std::vector<CellResult> cells;
  for (int n : grid.subjects) {
    for (double sigma : grid.sigmas) {
      const auto* points = gt.find(model, n, sigma);
      if (!points) {
        std::ostringstream msg;
        msg << model << ": no ground truth for n=" << n << " sigma=" << sigma << "; cell skipped";
        warnings.push_back(msg.str());
        continue;
      }
      if (!points->empty() && points->back() >= mesh.vertex_count()) {
        throw Error(Error::Kind::Data, model + ": ground-truth vertex out of range");
      }
      for (double r : grid.tolerances) {
        CellResult cell;
        cell.model = model;
        cell.subjects = n;
        cell.sigma = sigma;
        cell.match = neighborhoods.match(*points, r);
        cell.iou = iou(cell.match);
        cell.f1 = f1(cell.match);
        cells.push_back(std::move(cell));
      }
    }
  }
  return cells;
}

Aggregate aggregate(std::span<const CellResult> cells) {
  Aggregate agg;
  agg.cells = cells.size();
  struct Acc {
    double iou = 0, f1 = 0;
    std::size_t n = 0;
  };
  std::map<std::int64_t, Acc> by_r;
  std::map<std::tuple<int, std::int64_t, std::int64_t>, Acc> by_n_sigma_r;
  auto micros = [](double x) { return static_cast<std::int64_t>(std::llround(x * 1e6)); };
  double iou_sum = 0, f1_sum = 0;
  for (const auto& c : cells) {
    if (!c.iou || !c.f1) continue;
    ++agg.defined_cells;
    iou_sum += *c.iou;
    f1_sum += *c.f1;
    auto& a = by_r[micros(c.match.tolerance)];
    a.iou += *c.iou;
    a.f1 += *c.f1;
    ++a.n;
    auto& b = by_n_sigma_r[{c.subjects, micros(c.sigma), micros(c.match.tolerance)}];
    b.iou += *c.iou;
    b.f1 += *c.f1;
    ++b.n;
  }
  if (agg.defined_cells > 0) {
    agg.mean_iou = iou_sum / static_cast<double>(agg.defined_cells);
    agg.mean_f1 = f1_sum / static_cast<double>(agg.defined_cells);
  }
  for (const auto& [r, a] : by_r) {
    agg.per_tolerance.push_back({0, 0, r * 1e-6, a.iou / a.n, a.f1 / a.n, a.n});
  }
  for (const auto& [key, a] : by_n_sigma_r) {
    const auto& [n, s, r] = key;
    agg.per_subjects_sigma.push_back({n, s * 1e-6, r * 1e-6, a.iou / a.n, a.f1 / a.n, a.n});
  }

  // Larger tolerances can only turn misses into hits for a fixed cell.
  std::map<std::tuple<std::string, int, std::int64_t>, std::vector<const CellResult*>> series;
  for (const auto& c : cells) series[{c.model, c.subjects, micros(c.sigma)}].push_back(&c);
  for (auto& [key, list] : series) {
    std::sort(list.begin(), list.end(),
              [](const CellResult* a, const CellResult* b) { return a->match.tolerance < b->match.tolerance; });
    for (std::size_t i = 1; i < list.size(); ++i) {
      const auto& p = *list[i - 1];
      const auto& q = *list[i];
      if (p.iou && q.iou && (*q.iou < *p.iou || *q.f1 < *p.f1)) {
        ++agg.monotonicity_violations;
        break;
      }
    }
  }
  return agg;
}

std::string format_number(double x) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return ec == std::errc() ? std::string(buf, end) : std::string("nan");
}

void write_cells_csv(std::ostream& out, std::span<const CellResult> cells) {
  out << "model,n,sigma,r,TP,FP,FN,IOU,F1\n";
  for (const auto& c : cells) {
    out << c.model << ',' << c.subjects << ',' << format_number(c.sigma) << ',' << format_number(c.match.tolerance)
        << ',' << c.match.true_positives << ',' << c.match.false_positives << ',' << c.match.false_negatives << ','
        << (c.iou ? format_number(*c.iou) : "") << ',' << (c.f1 ? format_number(*c.f1) : "") << '\n';
  }
}

}  // namespace gmsr
