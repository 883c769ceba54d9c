#include <doctest.h>

#include <cmath>
#include <sstream>

#include "sphrobin/convex_body.hpp"
#include "sphrobin/error.hpp"
#include "sphrobin/random.hpp"
#include "sphrobin/spaceform.hpp"

using namespace sphrobin;

namespace {

const double kHalfPi = kPi / 2;

double geodesic(const Vec3& a, const Vec3& b) { return std::atan2(a.cross(b).norm(), a.dot(b)); }

CapBody lens(double separation, double rho) {
  const Vec3 a(std::sin(separation / 2), 0, std::cos(separation / 2));
  const Vec3 b(-std::sin(separation / 2), 0, std::cos(separation / 2));
  return CapBody::create({CapConstraint::make(a, rho), CapConstraint::make(b, rho)});
}

// Distance from p to the boundary by sampling every cap circle at 10^4
// points, keeping those on the body, then resampling 10^4 points around the
// best sample of each circle.
double sampled_boundary_distance(const CapBody& body, const Vec3& p) {
  constexpr int kSamples = 10000;
  double best = 1e300;
  for (const CapConstraint& c : body.constraints()) {
    double best_theta = 0.0, best_here = 1e300;
    for (int i = 0; i < kSamples; ++i) {
      const double theta = 2 * kPi * i / kSamples;
      const Vec3 q = c.circle_point(theta);
      if (!contains(body, q, 1e-12)) continue;
      const double d = geodesic(p, q);
      if (d < best_here) {
        best_here = d;
        best_theta = theta;
      }
    }
    if (best_here == 1e300) continue;
    const double window = 2 * kPi / kSamples;
    for (int i = 0; i <= kSamples; ++i) {
      const Vec3 q = c.circle_point(best_theta - window + 2 * window * i / kSamples);
      if (contains(body, q, 1e-12)) best_here = std::min(best_here, geodesic(p, q));
    }
    best = std::min(best, best_here);
  }
  return best;
}

// Fraction of uniform sphere samples inside the body, times 4 pi.
double monte_carlo_area(const CapBody& body, int samples, std::uint64_t seed, double* stderr_out) {
  Rng rng(seed);
  int hits = 0;
  for (int i = 0; i < samples; ++i) hits += contains(body, rng.point_on_sphere());
  const double f = static_cast<double>(hits) / samples;
  *stderr_out = 4 * kPi * std::sqrt(f * (1 - f) / samples);
  return 4 * kPi * f;
}

}  // namespace

TEST_CASE("cap constraints validate their inputs") {
  CHECK_THROWS_AS(CapConstraint::make(Vec3::Zero(), 1.0), GeometryError);
  CHECK_THROWS_AS(CapConstraint::make(Vec3::UnitZ(), 0.0), GeometryError);
  CHECK_THROWS_AS(CapConstraint::make(Vec3::UnitZ(), 1.6), GeometryError);
  const CapConstraint c = CapConstraint::make(Vec3(0, 0, 3), 0.5);
  CHECK(c.pole.norm() == doctest::Approx(1.0).epsilon(1e-15));
  for (double theta : {0.0, 1.0, 4.0}) {
    CHECK(geodesic(c.circle_point(theta), c.pole) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(c.circle_tangent(theta).dot(c.circle_point(theta)) == doctest::Approx(0.0));
  }
}

TEST_CASE("empty bodies are rejected") {
  CHECK_THROWS_AS(CapBody::create({}), GeometryError);
  CHECK_THROWS_AS(CapBody::create({CapConstraint::make(Vec3::UnitZ(), 0.4),
                                   CapConstraint::make(-Vec3::UnitZ(), 0.4)}),
                  GeometryError);
}

TEST_CASE("octant membership") {
  const CapBody o = octant_body();
  CHECK(contains(o, Vec3(1, 1, 1).normalized()));
  CHECK_FALSE(contains(o, Vec3(-1, 0, 0)));
  CHECK(contains(o, Vec3::UnitX()));
}

TEST_CASE("distance to boundary") {
  const CapBody o = octant_body();
  CHECK(distance_to_boundary(o, Vec3(1, 1, 1).normalized()) ==
        doctest::Approx(std::asin(1 / std::sqrt(3.0))).epsilon(1e-12));
  CHECK(distance_to_boundary(ball_body(Vec3::UnitY(), 0.7), Vec3::UnitY()) ==
        doctest::Approx(0.7).epsilon(1e-14));
  CHECK(std::abs(distance_to_boundary(o, Vec3(1, 1, 0).normalized())) < 1e-15);
  CHECK_THROWS_AS(distance_to_boundary(o, Vec3(-1, 0, 0)), PreconditionError);
}

TEST_CASE("distance to boundary agrees with dense boundary sampling") {
  for (std::uint64_t seed : {3u, 11u}) {
    const CapBody body = seed == 3 ? octant_body() : random_body(seed, 6, 0.5);
    for (const Vec3& p : sample_interior(body, 100, seed)) {
      const double oracle = sampled_boundary_distance(body, p);
      REQUIRE(std::abs(distance_to_boundary(body, p) - oracle) <= 1e-6);
    }
  }
}

TEST_CASE("inner parallels shift every radius") {
  const CapBody ball = ball_body(Vec3::UnitZ(), 1.0);
  const CapBody shrunk = inner_parallel(ball, 0.25);
  CHECK(shrunk.constraints()[0].rho == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(shrunk.inradius() == doctest::Approx(0.75).epsilon(1e-12));

  const CapBody o = octant_body();
  const CapBody o1 = inner_parallel(o, 0.1);
  for (const auto& c : o1.constraints()) CHECK(c.rho == doctest::Approx(kHalfPi - 0.1));
  CHECK_THROWS_AS(inner_parallel(o, o.inradius() + 0.01), GeometryError);
  CHECK_THROWS_AS(inner_parallel(o, -0.1), PreconditionError);

  // {p : d(p, boundary) >= t}
  for (const Vec3& p : sample_interior(o, 2000, 5)) {
    const bool deep = distance_to_boundary(o, p) >= 0.1;
    REQUIRE(contains(o1, p, 1e-12) == deep);
  }
}

TEST_CASE("boundary structures of the fixtures") {
  SUBCASE("hemisphere") {
    const CapBody h = ball_body(Vec3::UnitZ(), kHalfPi);
    const BoundaryStructure s = boundary_structure(h);
    CHECK(s.arcs.size() == 1);
    CHECK(s.vertices.empty());
    CHECK(s.arcs[0].sweep() == doctest::Approx(2 * kPi));
    CHECK(perimeter(h) == doctest::Approx(2 * kPi).epsilon(1e-14));
    CHECK(area(h) == doctest::Approx(2 * kPi).epsilon(1e-14));
    CHECK(inradius(h) == doctest::Approx(kHalfPi).epsilon(1e-12));
  }
  SUBCASE("octant") {
    const CapBody o = octant_body();
    const BoundaryStructure s = boundary_structure(o);
    CHECK(s.arcs.size() == 3);
    CHECK(s.vertices.size() == 3);
    for (const auto& a : s.arcs) CHECK(a.sweep() == doctest::Approx(kHalfPi).epsilon(1e-12));
    for (const auto& v : s.vertices) CHECK(v.exterior_angle == doctest::Approx(kHalfPi).epsilon(1e-12));
    CHECK(perimeter(o) == doctest::Approx(1.5 * kPi).epsilon(1e-13));
    CHECK(area(o) == doctest::Approx(kHalfPi).epsilon(1e-13));
    CHECK(o.inradius() == doctest::Approx(std::asin(1 / std::sqrt(3.0))).epsilon(1e-12));
    CHECK((o.incenter() - Vec3(1, 1, 1).normalized()).norm() < 1e-9);
  }
  SUBCASE("lens") {
    // Circles of radius rho about poles gamma apart meet where
    // cos(rho) = cos(gamma/2) cos(h); half-width h of the lens.
    const double gamma = 0.8, rho = 1.0;
    const CapBody l = lens(gamma, rho);
    const BoundaryStructure s = boundary_structure(l);
    CHECK(s.arcs.size() == 2);
    CHECK(s.vertices.size() == 2);
    const double h = std::acos(std::cos(rho) / std::cos(gamma / 2));
    for (const auto& v : s.vertices) {
      CHECK(std::abs(v.point.x()) < 1e-12);
      CHECK(std::abs(v.point.y()) == doctest::Approx(std::sin(h)).epsilon(1e-12));
      CHECK(v.exterior_angle > 0.0);
      CHECK(v.exterior_angle < kPi);
    }
    CHECK(l.inradius() == doctest::Approx(rho - gamma / 2).epsilon(1e-12));
  }
}

TEST_CASE("arcs and vertices alternate along a closed curve") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const CapBody body = random_body(seed, 3 + seed % 6, 0.5);
    const BoundaryStructure s = boundary_structure(body);
    REQUIRE(s.arcs.size() == s.vertices.size());
    for (std::size_t i = 0; i < s.vertices.size(); ++i) {
      const BoundaryVertex& v = s.vertices[i];
      const BoundaryArc& in = s.arcs[v.incoming_arc];
      const BoundaryArc& out = s.arcs[v.outgoing_arc];
      REQUIRE(v.outgoing_arc == static_cast<int>((v.incoming_arc + 1) % s.arcs.size()));
      REQUIRE((arc_point(body, in, in.theta_end) - v.point).norm() < 1e-7);
      REQUIRE((arc_point(body, out, out.theta_begin) - v.point).norm() < 1e-7);
      REQUIRE(v.exterior_angle > 0.0);
      REQUIRE(v.exterior_angle < kPi);
    }
    for (const auto& a : s.arcs) REQUIRE(a.length > 0.0);
  }
}

TEST_CASE("tangent configurations are rejected") {
  // Cap of radius 0.5 inside a cap of radius 0.8, circles touching internally.
  const Vec3 a = Vec3::UnitZ();
  const Vec3 b(std::sin(0.3), 0, std::cos(0.3));
  const CapBody body = CapBody::create({CapConstraint::make(a, 0.8), CapConstraint::make(b, 0.5)});
  CHECK_THROWS_AS(boundary_structure(body), GeometryError);
}

TEST_CASE("area and perimeter of a cap against a Monte Carlo oracle") {
  const CapBody cap = ball_body(Vec3(1, 2, 3), 0.5);
  CHECK(perimeter(cap) == doctest::Approx(2 * kPi * std::sin(0.5)).epsilon(1e-14));
  double se = 0.0;
  const double mc = monte_carlo_area(cap, 1000000, 17, &se);
  CHECK(std::abs(area(cap) - 2 * kPi * (1 - std::cos(0.5))) < 1e-13);
  CHECK(std::abs(area(cap) - mc) <= 3 * se);
}

TEST_CASE("Gauss-Bonnet area agrees with Monte Carlo on random bodies") {
  for (std::uint64_t seed : {2u, 9u, 23u}) {
    const CapBody body = random_body(seed, 7, 0.6);
    double se = 0.0;
    const double mc = monte_carlo_area(body, 1000000, seed + 100, &se);
    CHECK(std::abs(area(body) - mc) <= 3 * se);
  }
}

TEST_CASE("isoperimetric inequality") {
  auto ball_perimeter_of_area = [](double a) {
    // 2 pi (1 - cos R) = a
    return 2 * kPi * std::sin(std::acos(1 - a / (2 * kPi)));
  };
  const CapBody o = octant_body();
  CHECK(perimeter(o) - ball_perimeter_of_area(area(o)) > 0.1);
  const CapBody ball = ball_body(Vec3::UnitX(), 1.1);
  CHECK(std::abs(perimeter(ball) - ball_perimeter_of_area(area(ball))) < 1e-12);
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const CapBody body = random_body(seed, 3 + seed % 6, 0.5);
    REQUIRE(perimeter(body) > ball_perimeter_of_area(area(body)));
  }
}

TEST_CASE("perimeter decreases along inner parallels") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const CapBody body = random_body(seed, 3 + seed % 6, 0.5);
    double previous = perimeter(body);
    for (int i = 1; i < 20; ++i) {
      const double p = perimeter(inner_parallel(body, body.inradius() * i / 20.0));
      REQUIRE(p <= previous);
      previous = p;
    }
  }
}

TEST_CASE("hemisphere witness") {
  const HemisphereWitness o = hemisphere_witness(octant_body());
  CHECK((o.direction - Vec3(1, 1, 1).normalized()).norm() < 1e-12);
  // <p, w> on an octant arc is (cos t + sin t) / sqrt 3, smallest at the vertices.
  CHECK(o.margin == doctest::Approx(1 / std::sqrt(3.0)).epsilon(1e-12));

  const HemisphereWitness c = hemisphere_witness(ball_body(Vec3::UnitY(), 0.9));
  CHECK((c.direction - Vec3::UnitY()).norm() < 1e-12);
  CHECK(c.margin == doctest::Approx(std::cos(0.9)).epsilon(1e-12));

  // A hemisphere contains antipodal boundary points.
  CHECK_THROWS_AS(hemisphere_witness(ball_body(Vec3::UnitZ(), kHalfPi)), GeometryError);
  // So does a lune.
  CHECK_THROWS_AS(hemisphere_witness(CapBody::create({CapConstraint::make(Vec3::UnitX(), kHalfPi),
                                                      CapConstraint::make(Vec3::UnitY(), kHalfPi)})),
                  GeometryError);
}

TEST_CASE("random bodies honour the generator contract") {
  CHECK_THROWS_AS(random_body(1, 2, 0.4), PreconditionError);
  CHECK_THROWS_AS(random_body(1, 13, 0.4), PreconditionError);
  const CapBody a = random_body(1, 3, 0.4);
  const CapBody b = random_body(1, 3, 0.4);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.constraints()[i].pole == b.constraints()[i].pole);
    CHECK(a.constraints()[i].rho == b.constraints()[i].rho);
  }
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const CapBody body = random_body(seed, 3 + seed % 10, 0.5);
    REQUIRE(contains(body, body.incenter(), 1e-12));
    REQUIRE(midpoint_convexity_violations(body, 1000, seed) == 0);
    REQUIRE(hemisphere_witness(body).margin > 0.0);
  }
}

TEST_CASE("body text format round-trips") {
  const CapBody body = random_body(4, 5, 0.5);
  std::stringstream buffer;
  write_body(buffer, body);
  const CapBody back = read_body(buffer);
  REQUIRE(back.size() == body.size());
  for (std::size_t i = 0; i < body.size(); ++i) {
    CHECK(back.constraints()[i].rho == body.constraints()[i].rho);
    CHECK((back.constraints()[i].pole - body.constraints()[i].pole).norm() < 1e-15);
  }
  std::istringstream bad("0 0 1\n");
  CHECK_THROWS_AS(read_body(bad), PreconditionError);
  std::istringstream comments("# cap\n0 0 1 0.5  # trailing\n\n");
  CHECK(read_body(comments).size() == 1);
  CHECK_THROWS_AS(read_body_file("/nonexistent/body"), PreconditionError);
  CHECK(perimeter(read_body_file(SPHROBIN_DATA_DIR "/octant.body")) ==
        doctest::Approx(1.5 * kPi).epsilon(1e-13));
}
