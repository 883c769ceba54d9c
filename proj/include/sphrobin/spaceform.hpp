#pragma once

// Scalar primitives for the unit-curvature space forms and closed-form
// geodesic-ball geometry on the round sphere S^n.

#include <functional>
#include <numbers>

namespace sphrobin {

inline constexpr double kPi = std::numbers::pi;

struct SpaceFormParams {
  int kappa = 1;  // sectional curvature, one of -1, 0, 1
  int dim = 2;

  /// Throws PreconditionError unless kappa is in {-1,0,1} and dim >= 2.
  void validate() const;
};

/// sinh t, t or sin t for kappa = -1, 0, 1.
double sn(int kappa, double t);
/// Derivative of sn: cosh t, 1 or cos t.
double cn(int kappa, double t);

/// Composite Gauss-Legendre quadrature on [a, b]. The panel count doubles
/// until two successive estimates differ by less than `tol` (absolute,
/// scaled by max(1, |I|)).
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-12);

/// L_j(t) = int_0^t cn^{n-j} sn^{j-1}, with L_0 = 1. Closed forms are used on S^2.
double steiner_L(int j, const SpaceFormParams& params, double t);

/// Surface measure of the unit (n-1)-sphere, 2 pi^{n/2} / Gamma(n/2).
double sigma(int n);

struct BallGeometry {
  int dim = 2;
  double radius = 0.0;
  double perimeter = 0.0;
  double volume = 0.0;
};

/// Geodesic ball of radius R in S^n; R must lie in (0, pi/2].
BallGeometry ball_geometry(int n, double radius);

/// Perimeter sigma_n sin^{n-1}(R) of the geodesic ball of radius R.
double ball_perimeter(int n, double radius);

/// Volume sigma_n int_0^R sin^{n-1}.
double ball_volume(int n, double radius);

/// Radius R in (0, pi/2] of the ball with the given perimeter, by bisection
/// to 1e-12. Throws GeometryError when P > sigma_n.
double radius_from_perimeter(int n, double perimeter);

}  // namespace sphrobin
