#pragma once

// Total curvature measures of a cap body on S^2 and the Steiner formulas
// for its outer parallel sets.

#include <cstdint>

#include "sphrobin/convex_body.hpp"

namespace sphrobin {

struct CurvatureMeasures {
  double phi0 = 0.0;  // total geodesic curvature, corners included
  double phi1 = 0.0;  // boundary length
  double phi2 = 0.0;  // area
};

CurvatureMeasures compute_measures(const CapBody& body);

/// Area of the outer parallel set at distance s: phi2 + sin(s) phi1 + (1 - cos s) phi0.
/// Requires 0 <= s < pi/2, the guaranteed reach of a strongly convex set.
double steiner_volume(const CurvatureMeasures& m, double s);
/// Boundary length of the outer parallel set: cos(s) phi1 + sin(s) phi0.
double steiner_boundary(const CurvatureMeasures& m, double s);

double steiner_volume(const CapBody& body, double s);
double steiner_boundary(const CapBody& body, double s);

/// (phi0 / 2pi)^2 - (1 - (phi1 / 2pi)^2); nonnegative for convex bodies and
/// zero exactly on geodesic balls.
double alexandrov_fenchel_gap(const CurvatureMeasures& m);

struct MonteCarloEstimate {
  double value = 0.0;
  double standard_error = 0.0;
  long samples = 0;
};

/// Area of {p : d(p, body) <= s} from uniform samples of the whole sphere.
MonteCarloEstimate monte_carlo_outer_volume(const CapBody& body, double s, long samples,
                                            std::uint64_t seed);

/// Area of {p : 0 < d(p, body) <= s}, the shell added by the outer parallel.
MonteCarloEstimate monte_carlo_shell_volume(const CapBody& body, double s, long samples,
                                            std::uint64_t seed);

}  // namespace sphrobin
