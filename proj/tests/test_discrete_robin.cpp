#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "sphrobin/convex_body.hpp"
#include "sphrobin/discrete_robin.hpp"
#include "sphrobin/error.hpp"
#include "sphrobin/radial_eigensolver.hpp"
#include "sphrobin/spaceform.hpp"

using namespace sphrobin;

TEST_CASE("mesh construction") {
  const CapBody ball = ball_body(Vec3::UnitZ(), 1.0);
  const GeodesicMesh m0 = mesh_body(ball, 0);
  CHECK(m0.boundary_edges.size() >= 16);
  CHECK(m0.level == 0);

  const CapBody o = octant_body();
  for (int level : {1, 3}) {
    const GeodesicMesh m = mesh_body(o, level);
    int corners = 0;
    for (const Vec3& v : m.vertices) {
      for (const Vec3& e : {Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()}) corners += (v - e).norm() < 1e-15;
    }
    CHECK(corners == 3);
    for (const Vec3& v : m.vertices) {
      REQUIRE(std::abs(v.norm() - 1.0) < 1e-14);
      REQUIRE(contains(o, v, 1e-9));
    }
    for (const auto& t : m.triangles) {
      const Vec3& a = m.vertices[t[0]];
      const Vec3& b = m.vertices[t[1]];
      const Vec3& c = m.vertices[t[2]];
      REQUIRE((b - a).cross(c - a).dot(a + b + c) > 0.0);
    }
  }
  CHECK_THROWS_AS(mesh_body(o, 7), PreconditionError);
  CHECK_THROWS_AS(mesh_body(o, -1), PreconditionError);
}

TEST_CASE("boundary edges trace the body boundary") {
  const CapBody body = random_body(12, 6, 0.5);
  const GeodesicMesh m = mesh_body(body, 2);
  std::set<int> on_boundary;
  for (const auto& e : m.boundary_edges) {
    on_boundary.insert(e.a);
    on_boundary.insert(e.b);
  }
  for (int i : on_boundary) REQUIRE(std::abs(distance_to_boundary(body, m.vertices[i])) < 1e-12);
  // Chord midpoints stay O(h^2) away from the curved boundary.
  for (const auto& e : m.boundary_edges) {
    const Vec3 mid = (m.vertices[e.a] + m.vertices[e.b]).normalized();
    REQUIRE(distance_to_body(body, mid) <= m.h * m.h);
  }
}

TEST_CASE("mass matrices reproduce area and perimeter") {
  for (const CapBody& body : {octant_body(), random_body(3, 7, 0.5), ball_body(Vec3::UnitY(), 0.8)}) {
    double previous_area_error = 1.0;
    for (int level : {2, 3, 4}) {
      const GeodesicMesh m = mesh_body(body, level);
      const double area_error = std::abs(mesh_area(m) - area(body)) / area(body);
      const double length_error = std::abs(mesh_boundary_length(m) - perimeter(body)) / perimeter(body);
      if (level == 3) {
        CHECK(area_error <= 0.01);
        CHECK(length_error <= 0.005);
      }
      CHECK(area_error < previous_area_error);
      previous_area_error = area_error;
    }
  }
}

TEST_CASE("Neumann mode is constant") {
  const DiscreteEigResult r = assemble_and_solve(mesh_body(octant_body(), 2), 0.0);
  CHECK(std::abs(r.lambda_h) <= 1e-10);
}

TEST_CASE("cos r family converges to 2") {
  const double radius = 1.0;
  double previous = 1e300;
  for (int level : {1, 2, 3, 4}) {
    const DiscreteEigResult r = assemble_and_solve(mesh_body(ball_body(Vec3::UnitZ(), radius), level),
                                                   std::tan(radius));
    const double error = std::abs(r.lambda_h - 2.0);
    CHECK(error < previous);
    previous = error;
  }
  CHECK(previous < 0.01);
}

TEST_CASE("ball eigenvalue against the shooting solver") {
  const double exact = first_eigenvalue({2, 1.0, -1.0}).lambda;
  double previous = 1e300;
  for (int level : {2, 3, 4}) {
    const DiscreteEigResult r = assemble_and_solve(mesh_body(ball_body(Vec3::UnitZ(), 1.0), level), -1.0);
    const double error = std::abs(r.lambda_h - exact) / std::abs(exact);
    CHECK(error < previous);
    CHECK(r.residual <= 1e-9 * std::max(1.0, std::abs(r.lambda_h)));
    previous = error;
  }
  CHECK(previous <= 0.02);
}

TEST_CASE("refinement increments shrink") {
  const CapBody o = octant_body();
  std::vector<double> lambdas;
  for (int level : {2, 3, 4, 5}) lambdas.push_back(assemble_and_solve(mesh_body(o, level), -1.0).lambda_h);
  for (std::size_t i = 2; i < lambdas.size(); ++i) {
    CHECK(std::abs(lambdas[i] - lambdas[i - 1]) < std::abs(lambdas[i - 1] - lambdas[i - 2]));
  }
}

TEST_CASE("fem_estimate carries the ball calibration") {
  const FemEstimate e = fem_estimate(octant_body(), -1.0, 3);
  CHECK(e.level == 3);
  CHECK(e.ball_relative_error > 0.0);
  CHECK(e.ball_relative_error < 0.02);
  CHECK(e.lambda_h < 0.0);
}

TEST_CASE("mesh text format") {
  const GeodesicMesh m = mesh_body(octant_body(), 0);
  std::ostringstream out;
  write_mesh(out, m);
  std::istringstream in(out.str());
  std::string tag;
  std::size_t v = 0, f = 0, b = 0;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    row >> tag;
    if (tag == "v") ++v;
    if (tag == "f") {
      ++f;
      int i, j, k;
      row >> i >> j >> k;
      REQUIRE(std::min({i, j, k}) >= 1);
      REQUIRE(std::max({i, j, k}) <= static_cast<int>(m.vertices.size()));
    }
    if (tag == "b") ++b;
  }
  CHECK(v == m.vertices.size());
  CHECK(f == m.triangles.size());
  CHECK(b == m.boundary_edges.size());
}
