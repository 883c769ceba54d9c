#include "sphrobin/curvature_measures.hpp"

#include <cmath>
#include <string>

#include "sphrobin/error.hpp"
#include "sphrobin/random.hpp"
#include "sphrobin/spaceform.hpp"

namespace sphrobin {

namespace {

void check_reach(double s) {
  if (!(s >= 0.0 && s < kPi / 2)) {
    throw PreconditionError("outer parallel distance " + std::to_string(s) +
                            " outside [0, pi/2), the guaranteed reach");
  }
}

// Counts samples whose distance to the body lies in (lo, hi].
MonteCarloEstimate count_band(const CapBody& body, double lo, double hi, long samples,
                              std::uint64_t seed, bool include_body) {
  if (samples <= 0) throw PreconditionError("Monte Carlo needs a positive sample count");
  const BoundaryStructure boundary = boundary_structure(body);
  Rng rng(seed);
  long hits = 0;
  for (long i = 0; i < samples; ++i) {
    const Vec3 p = rng.point_on_sphere();
    if (contains(body, p)) {
      if (include_body) ++hits;
      continue;
    }
    const double d = distance_to_body(body, boundary, p);
    if (d <= hi && d > lo) ++hits;
  }
  const double fraction = static_cast<double>(hits) / samples;
  const double sphere = 4.0 * kPi;
  return {sphere * fraction, sphere * std::sqrt(fraction * (1.0 - fraction) / samples), samples};
}

}  // namespace

CurvatureMeasures compute_measures(const CapBody& body) {
  const BoundaryStructure boundary = boundary_structure(body);
  CurvatureMeasures m;
  m.phi1 = perimeter(boundary, body);
  m.phi2 = area(boundary, body);
  for (const auto& arc : boundary.arcs) m.phi0 += arc.geodesic_curvature * arc.length;
  for (const auto& v : boundary.vertices) m.phi0 += v.exterior_angle;
  return m;
}

double steiner_volume(const CurvatureMeasures& m, double s) {
  check_reach(s);
  return m.phi2 + std::sin(s) * m.phi1 + (1.0 - std::cos(s)) * m.phi0;
}

double steiner_boundary(const CurvatureMeasures& m, double s) {
  check_reach(s);
  return std::cos(s) * m.phi1 + std::sin(s) * m.phi0;
}

double steiner_volume(const CapBody& body, double s) {
  return steiner_volume(compute_measures(body), s);
}

double steiner_boundary(const CapBody& body, double s) {
  return steiner_boundary(compute_measures(body), s);
}

double alexandrov_fenchel_gap(const CurvatureMeasures& m) {
  const double full = sigma(2);
  const double curvature = m.phi0 / full;
  const double length = m.phi1 / full;
  return curvature * curvature - (1.0 - length * length);
}

MonteCarloEstimate monte_carlo_outer_volume(const CapBody& body, double s, long samples,
                                            std::uint64_t seed) {
  return count_band(body, -1.0, s, samples, seed, true);
}

MonteCarloEstimate monte_carlo_shell_volume(const CapBody& body, double s, long samples,
                                            std::uint64_t seed) {
  return count_band(body, 0.0, s, samples, seed, false);
}

}  // namespace sphrobin
