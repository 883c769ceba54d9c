#pragma once

// Piecewise-linear Rayleigh-Ritz estimate of the first Robin eigenvalue of a
// cap body, on a flat-facet triangulation with vertices on the sphere.

#include <array>
#include <iosfwd>
#include <vector>

#include "sphrobin/convex_body.hpp"

namespace sphrobin {

struct BoundaryEdge {
  int a = 0;
  int b = 0;
  double length = 0.0;  // arc length along the cap circle
  int arc = 0;
  double theta_a = 0.0;
  double theta_b = 0.0;
};

struct GeodesicMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<BoundaryEdge> boundary_edges;
  double h = 0.0;  // longest chord edge
  int level = 0;
};

/// Fan from the incenter to a corner-preserving boundary polyline (spacing
/// about 0.2, at least 16 points), refined `level` times by midpoint
/// subdivision with interior midpoints projected to the sphere and boundary
/// midpoints to their arc. Requires 0 <= level <= 6.
GeodesicMesh mesh_body(const CapBody& body, int level);

struct DiscreteEigResult {
  double lambda_h = 0.0;
  int refinement_level = 0;
  double residual = 0.0;  // |A x - lambda M x| / |M x|
  int iterations = 0;
  std::size_t dofs = 0;
  double shift = 0.0;
};

/// Total consistent-mass and boundary-mass sums (area and perimeter of the mesh).
double mesh_area(const GeodesicMesh& mesh);
double mesh_boundary_length(const GeodesicMesh& mesh);

/// Smallest eigenvalue of (K + beta B) x = lambda M x by shifted inverse
/// iteration, the shift lowered until A - shift M is positive definite.
DiscreteEigResult assemble_and_solve(const GeodesicMesh& mesh, double beta);

/// Lines `v x y z`, `f i j k`, `b i j` with 1-based indices.
void write_mesh(std::ostream& out, const GeodesicMesh& mesh);

}  // namespace sphrobin

namespace sphrobin {

struct FemEstimate {
  double lambda_h = 0.0;
  /// Relative error of the same discretization on the ball with equal
  /// perimeter, against the shooting solver.
  double ball_relative_error = 0.0;
  int level = 0;
};

/// lambda_h for the body plus the calibration error of the equal-perimeter ball.
FemEstimate fem_estimate(const CapBody& body, double beta, int level);

}  // namespace sphrobin
