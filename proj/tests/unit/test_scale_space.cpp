#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "../support/fixtures.hpp"
#include "gmsr/detector.hpp"
#include "gmsr/scale_space.hpp"

using namespace gmsr;
using namespace gmsr::testing;

TEST_SUITE("scale_space") {
  TEST_CASE("base scale") {
    CHECK(base_scale(unit_cube()) == doctest::Approx(0.003 * std::sqrt(3.0)));
    CHECK(base_scale(scaled(unit_cube(), 10)) == doctest::Approx(10 * base_scale(unit_cube())));
    CHECK_THROWS_AS(base_scale(Mesh({{1, 1, 1}}, {})), Error);
    CHECK_THROWS_AS(base_scale(Mesh()), Error);
  }

  TEST_CASE("isolated vertex is unchanged") {
    const Mesh m({{0, 0, 0}, {10, 0, 0}, {0, 10, 0}}, {{0, 1, 2}});
    CHECK(gaussian_smooth(m, 0.5) == m);
  }

  TEST_CASE("two close vertices stay symmetric about their midpoint") {
    const Mesh m({{0, 0, 0}, {1, 0, 0}, {0.5, 100, 0}}, {{0, 1, 2}});
    const Mesh s = gaussian_smooth(m, 0.5);
    const Vec3 a = s.position(0), b = s.position(1);
    CHECK(a.x > 0);
    CHECK(b.x < 1);
    CHECK(a.x + b.x == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(a.y == 0);
    CHECK(s.position(2) == m.position(2));
  }

  TEST_CASE("smoothing reduces radial noise on a sphere") {
    const Mesh sphere = icosphere(4);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> noise(-0.02, 0.02);
    std::vector<Vec3> v(sphere.vertices().begin(), sphere.vertices().end());
    for (auto& p : v) p = (1 + noise(rng)) * p;
    const Mesh noisy = sphere.with_positions(v);
    auto radial_variance = [](const Mesh& m) {
      double mean = 0, sq = 0;
      for (const auto& p : m.vertices()) mean += norm(p);
      mean /= static_cast<double>(m.vertex_count());
      for (const auto& p : m.vertices()) sq += (norm(p) - mean) * (norm(p) - mean);
      return sq / static_cast<double>(m.vertex_count());
    };
    const Mesh smooth = gaussian_smooth(noisy, base_scale(noisy) * 5);
    CHECK(radial_variance(smooth) < radial_variance(noisy));
    const Mesh smooth1 = gaussian_smooth(noisy, base_scale(noisy));
    CHECK(radial_variance(smooth1) <= radial_variance(noisy));
  }

  TEST_CASE("tiny sigma is the identity") {
    const Mesh m = bumpy_sphere(2);
    CHECK(gaussian_smooth(m, 1e-6) == m);
  }

  TEST_CASE("translation equivariance") {
    const Mesh m = bumpy_sphere(2);
    const Vec3 t{0.25, -0.5, 2.0};
    const double sigma = 0.05;
    const Mesh a = gaussian_smooth(translated(m, t), sigma);
    const Mesh b = translated(gaussian_smooth(m, sigma), t);
    double worst = 0;
    for (VertexIndex i = 0; i < m.vertex_count(); ++i) worst = std::max(worst, norm(a.position(i) - b.position(i)));
    CHECK(worst <= 1e-12);
  }

  TEST_CASE("result lies in the bounding box of its contributors") {
    const Mesh m = bumpy_sphere(2);
    const double sigma = 0.04;
    const Mesh s = gaussian_smooth(m, sigma);
    for (VertexIndex i = 0; i < m.vertex_count(); ++i) {
      Vec3 lo{1e9, 1e9, 1e9}, hi{-1e9, -1e9, -1e9};
      for (const auto& q : m.vertices()) {
        if (squared_distance(q, m.position(i)) > 9 * sigma * sigma) continue;
        lo = {std::min(lo.x, q.x), std::min(lo.y, q.y), std::min(lo.z, q.z)};
        hi = {std::max(hi.x, q.x), std::max(hi.y, q.y), std::max(hi.z, q.z)};
      }
      const Vec3 p = s.position(i);
      CHECK((p.x >= lo.x - 1e-15 && p.x <= hi.x + 1e-15));
      CHECK((p.y >= lo.y - 1e-15 && p.y <= hi.y + 1e-15));
      CHECK((p.z >= lo.z - 1e-15 && p.z <= hi.z + 1e-15));
    }
  }

  TEST_CASE("grid smoothing matches the direct sum") {
    const Mesh m = bumpy_sphere(2);
    const double sigma = 0.07;
    const Mesh s = gaussian_smooth(m, sigma);
    for (VertexIndex i = 0; i < m.vertex_count(); i += 7) {
      const Vec3 p = m.position(i);
      Vec3 acc{};
      double wsum = 0;
      for (const auto& q : m.vertices()) {
        const double d2 = squared_distance(p, q);
        if (d2 > 9 * sigma * sigma) continue;
        const double w = std::exp(-d2 / (2 * sigma * sigma));
        acc += w * (q - p);
        wsum += w;
      }
      CHECK(norm(s.position(i) - (p + (1 / wsum) * acc)) <= 1e-12);
    }
  }

  TEST_CASE("scale stack") {
    const Mesh m = bumpy_sphere(2);
    const std::vector<int> mult{1, 3, 5};
    const ScaleStack stack = build_scale_stack(m, mult);
    REQUIRE(stack.levels.size() == 3);
    const double eps = base_scale(m);
    CHECK(stack.base_scale == eps);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(stack.levels[i].multiplier == mult[i]);
      CHECK(stack.levels[i].sigma == doctest::Approx(mult[i] * eps));
      CHECK(stack.levels[i].mesh.vertex_count() == m.vertex_count());
      CHECK(stack.levels[i].normals.normals.size() == m.vertex_count());
    }
    const std::vector<int> bad{3, 1};
    CHECK_THROWS_AS(build_scale_stack(m, bad), Error);
    const std::vector<int> zero{0};
    CHECK_THROWS_AS(build_scale_stack(m, zero), Error);
  }

  TEST_CASE("single-scale final response equals that level") {
    DetectorConfig c;
    c.scales = {1};
    const Detection d = detect(bumpy_sphere(3), c);
    REQUIRE(d.scales.size() == 1);
    CHECK(d.rho == d.scales[0].rho);
  }
}
