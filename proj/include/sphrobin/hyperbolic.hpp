#pragma once

// Poincare half-space model of H^n and a certified witness that inner
// parallel sets of the convex cylinder {|x^| <= 1} fail to be convex.

#include <vector>

namespace sphrobin::hyperbolic {

struct HalfSpacePoint {
  std::vector<double> xhat;  // first n-1 coordinates
  double xn = 1.0;           // height, > 0

  int dim() const { return static_cast<int>(xhat.size()) + 1; }
  /// Throws PreconditionError unless xn > 0 and every coordinate is finite.
  void validate() const;
};

/// 2 asinh(|x - y|_e / (2 sqrt(x_n y_n))).
double hyp_distance(const HalfSpacePoint& x, const HalfSpacePoint& y);

/// Point at hyperbolic arc-length fraction s in [0, 1] along the geodesic
/// from p to q: a vertical segment when p^ = q^, otherwise the circular arc
/// orthogonal to {x_n = 0}.
HalfSpacePoint geodesic_point(const HalfSpacePoint& p, const HalfSpacePoint& q, double s);

/// Closed t-neighbourhood of the vertical line through x0hat:
/// |x^ - x0^| <= sinh(t) x_n.
bool tube_contains(const std::vector<double>& x0hat, double t, const HalfSpacePoint& x);

/// Inner parallel set of the cylinder at distance delta:
/// x_n > 0 and |x^| <= 1 - sinh(delta) x_n.
bool cone_contains(double delta, const HalfSpacePoint& x);

/// Cylinder {|x^| <= 1}.
bool cylinder_contains(const HalfSpacePoint& x);

struct NonconvexityWitness {
  double delta = 0.0;
  HalfSpacePoint p;
  HalfSpacePoint q;
  double s_star = 0.0;
  HalfSpacePoint violating_point;
  double margin = 0.0;  // |g^(s*)| - (1 - sinh(delta) g_n(s*)) > 0
  bool endpoints_inside = false;
};

/// p = (0, 1/sinh delta), q on the cone boundary with |q^| = 1/2 at height
/// 1/(2 sinh delta); the geodesic between them is scanned for the largest
/// violation of the cone inequality. Throws SolverError if none is found.
NonconvexityWitness nonconvexity_witness(double delta, int n = 2, int scan_points = 20001);

}  // namespace sphrobin::hyperbolic
