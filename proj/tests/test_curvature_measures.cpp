#include <doctest.h>

#include <cmath>

#include "sphrobin/convex_body.hpp"
#include "sphrobin/curvature_measures.hpp"
#include "sphrobin/error.hpp"
#include "sphrobin/spaceform.hpp"

using namespace sphrobin;

TEST_CASE("curvature measures of the fixtures") {
  for (double r : {0.3, 1.0, 1.5}) {
    const CurvatureMeasures m = compute_measures(ball_body(Vec3(0, 1, 1), r));
    CHECK(m.phi0 == doctest::Approx(2 * kPi * std::cos(r)).epsilon(1e-13));
    CHECK(m.phi1 == doctest::Approx(2 * kPi * std::sin(r)).epsilon(1e-13));
    CHECK(m.phi2 == doctest::Approx(2 * kPi * (1 - std::cos(r))).epsilon(1e-13));
  }
  const CurvatureMeasures o = compute_measures(octant_body());
  CHECK(o.phi0 == doctest::Approx(1.5 * kPi).epsilon(1e-13));
  CHECK(o.phi1 == doctest::Approx(1.5 * kPi).epsilon(1e-13));
  CHECK(o.phi2 == doctest::Approx(0.5 * kPi).epsilon(1e-13));
  CHECK(std::abs(compute_measures(ball_body(Vec3::UnitZ(), kPi / 2)).phi0) < 1e-14);
}

TEST_CASE("measures match perimeter and area on the corpus") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const CapBody body = random_body(seed, 3 + seed % 6, 0.5);
    const CurvatureMeasures m = compute_measures(body);
    REQUIRE(m.phi1 == perimeter(body));
    REQUIRE(m.phi2 == area(body));
    REQUIRE(m.phi0 >= 0.0);
  }
}

TEST_CASE("Steiner formulas") {
  const CurvatureMeasures o = compute_measures(octant_body());
  CHECK(steiner_volume(o, 0.0) == o.phi2);
  CHECK(steiner_boundary(o, 0.0) == o.phi1);
  for (double r : {0.4, 1.0}) {
    for (double s : {0.1, 0.5, 1.2}) {
      const CapBody ball = ball_body(Vec3::UnitZ(), r);
      CHECK(steiner_volume(ball, s) == doctest::Approx(2 * kPi * (1 - std::cos(r + s))).epsilon(1e-13));
      CHECK(steiner_boundary(ball, s) == doctest::Approx(2 * kPi * std::sin(r + s)).epsilon(1e-13));
    }
  }
  CHECK_THROWS_AS(steiner_volume(o, kPi / 2), PreconditionError);
  CHECK_THROWS_AS(steiner_boundary(o, -0.1), PreconditionError);
}

TEST_CASE("octant outer-parallel volume against Monte Carlo") {
  const CapBody o = octant_body();
  const MonteCarloEstimate mc = monte_carlo_outer_volume(o, 0.1, 1000000, 2024);
  CHECK(mc.samples == 1000000);
  CHECK(std::abs(mc.value - steiner_volume(o, 0.1)) <= 3 * mc.standard_error);
}

TEST_CASE("Monte Carlo estimates are deterministic in the seed") {
  const CapBody body = random_body(8, 5, 0.5);
  const MonteCarloEstimate a = monte_carlo_outer_volume(body, 0.2, 20000, 7);
  const MonteCarloEstimate b = monte_carlo_outer_volume(body, 0.2, 20000, 7);
  CHECK(a.value == b.value);
  CHECK_THROWS_AS(monte_carlo_outer_volume(body, 0.2, 0, 7), PreconditionError);
}

TEST_CASE("boundary formula is the derivative of the volume formula") {
  for (std::uint64_t seed : {1u, 5u, 13u}) {
    const CurvatureMeasures m = compute_measures(random_body(seed, 6, 0.5));
    for (double s : {0.05, 0.4, 1.0}) {
      const double h = 1e-5;
      const double fd = (steiner_volume(m, s + h) - steiner_volume(m, s - h)) / (2 * h);
      CHECK(fd == doctest::Approx(steiner_boundary(m, s)).epsilon(1e-6));
    }
    const double h = 1e-6;
    const double slope0 = (steiner_boundary(m, h) - steiner_boundary(m, 0.0)) / h;
    CHECK(slope0 == doctest::Approx(m.phi0).epsilon(1e-5));
  }
}

TEST_CASE("Minkowski content of the boundary equals the perimeter") {
  // Richardson extrapolation of the shell quotient from s = 1e-2 and 5e-3.
  for (std::uint64_t seed : {0u, 3u}) {
    const CapBody body = seed == 0 ? octant_body() : random_body(seed, 5, 0.5);
    const double s = 1e-2;
    const MonteCarloEstimate big = monte_carlo_shell_volume(body, s, 1000000, 91 + seed);
    const MonteCarloEstimate small = monte_carlo_shell_volume(body, s / 2, 1000000, 92 + seed);
    const double estimate = 2 * small.value / (s / 2) - big.value / s;
    const double se = std::hypot(2 * small.standard_error / (s / 2), big.standard_error / s);
    CHECK(std::abs(estimate - perimeter(body)) <= 3 * se);
  }
}

TEST_CASE("Alexandrov-Fenchel gap") {
  for (double r : {0.2, 0.9, 1.5}) {
    CHECK(std::abs(alexandrov_fenchel_gap(compute_measures(ball_body(Vec3::UnitX(), r)))) <= 1e-9);
  }
  CHECK(alexandrov_fenchel_gap(compute_measures(octant_body())) ==
        doctest::Approx(0.125).epsilon(1e-12));
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const CapBody body = random_body(seed, 3 + (seed - 1) % 6, 0.5);
    REQUIRE(alexandrov_fenchel_gap(compute_measures(body)) >= -1e-9);
  }
}

TEST_CASE("Alexandrov-Fenchel gap vanishes as a body is cut down to a cap") {
  // Intersect a random body with caps about its incenter whose radius
  // decreases to just above the inradius; the result approaches that cap.
  const CapBody body = random_body(6, 6, 0.5);
  const double r = body.inradius();
  double previous = alexandrov_fenchel_gap(compute_measures(body));
  for (double factor : {1.3, 1.2, 1.1, 1.05, 1.02, 1.01, 1.001}) {
    std::vector<CapConstraint> caps = body.constraints();
    caps.push_back(CapConstraint::make(body.incenter(), r * factor));
    const double gap = alexandrov_fenchel_gap(compute_measures(CapBody::create(caps)));
    CHECK(gap <= previous);
    CHECK(gap >= -1e-9);
    previous = gap;
  }
  CHECK(previous < 1e-3);
}
