#pragma once

// Strongly convex bodies on S^2 represented as finite intersections of
// closed geodesic caps. The representation is closed under inner parallels:
// shrinking every cap radius by t gives exactly {p : d(p, boundary) >= t}.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace sphrobin {

using Vec3 = Eigen::Vector3d;

/// Closed cap {p : <p, pole> >= cos(rho)} with 0 < rho <= pi/2.
struct CapConstraint {
  Vec3 pole;
  double rho = 0.0;

  /// Normalizes `pole`; throws GeometryError on a zero pole or rho outside (0, pi/2].
  static CapConstraint make(const Vec3& pole, double rho);

  /// Orthonormal frame (u, v) with (u, v, pole) right-handed. The boundary
  /// circle is cos(rho) pole + sin(rho)(cos t u + sin t v), traversed with
  /// the cap on its left.
  Vec3 frame_u() const;
  Vec3 frame_v() const;
  Vec3 circle_point(double theta) const;
  /// Unit tangent of the boundary circle at parameter theta.
  Vec3 circle_tangent(double theta) const;
};

class CapBody {
 public:
  /// Validates the constraints and certifies a nonempty interior by
  /// locating the incenter. Throws GeometryError otherwise.
  static CapBody create(std::vector<CapConstraint> constraints);

  const std::vector<CapConstraint>& constraints() const { return constraints_; }
  std::size_t size() const { return constraints_.size(); }

  /// Center and radius of the largest inscribed geodesic ball.
  const Vec3& incenter() const { return incenter_; }
  double inradius() const { return inradius_; }

 private:
  CapBody() = default;
  friend CapBody inner_parallel(const CapBody& body, double t);

  std::vector<CapConstraint> constraints_;
  Vec3 incenter_ = Vec3::UnitZ();
  double inradius_ = 0.0;
};

/// Single cap of radius R about `pole`.
CapBody ball_body(const Vec3& pole, double radius);
/// Positive octant: hemispheres about e1, e2, e3.
CapBody octant_body();

/// Membership in the closed body; `tol` relaxes every constraint.
bool contains(const CapBody& body, const Vec3& p, double tol = 0.0);

/// Geodesic distance from a point of the body to its boundary.
double distance_to_boundary(const CapBody& body, const Vec3& p);


/// Inner parallel set {p : d(p, boundary) >= t}; requires 0 <= t < inradius.
CapBody inner_parallel(const CapBody& body, double t);

/// The inradius by exact feasibility tests, bisected to 1e-12.
double inradius(const CapBody& body);

struct BoundaryArc {
  int constraint = 0;
  double theta_begin = 0.0;
  double theta_end = 0.0;  // theta_end > theta_begin, possibly beyond 2 pi
  double length = 0.0;
  double geodesic_curvature = 0.0;  // cot(rho)
  double sweep() const { return theta_end - theta_begin; }
};

struct BoundaryVertex {
  Vec3 point;
  double exterior_angle = 0.0;
  int incoming_arc = 0;
  int outgoing_arc = 0;
};

/// Arcs in boundary order; vertex i joins arcs[i] to arcs[i + 1].
struct BoundaryStructure {
  std::vector<BoundaryArc> arcs;
  std::vector<BoundaryVertex> vertices;
};

/// Active boundary arcs of every cap and the corners joining them.
/// Throws GeometryError on tangencies within 1e-10.
BoundaryStructure boundary_structure(const CapBody& body);

double perimeter(const BoundaryStructure& boundary, const CapBody& body);
double area(const BoundaryStructure& boundary, const CapBody& body);
double perimeter(const CapBody& body);
/// Gauss-Bonnet: 2 pi - sum cos(rho_i) dtheta_i - sum exterior angles.
double area(const CapBody& body);

/// Geodesic distance from any point to the body (zero inside).
double distance_to_body(const CapBody& body, const Vec3& p);
double distance_to_body(const CapBody& body, const BoundaryStructure& boundary, const Vec3& p);

/// Point on the boundary arc at circle parameter theta.
Vec3 arc_point(const CapBody& body, const BoundaryArc& arc, double theta);

/// `count` boundary points evenly spaced in arc length.
std::vector<Vec3> sample_boundary(const CapBody& body, int count);

struct HemisphereWitness {
  Vec3 direction;
  double margin = 0.0;  // min over the body of <p, direction>
};

/// Direction w with <p, w> >= margin > 0 on the whole body, certifying
/// containment in an open hemisphere. Throws GeometryError if none is found.
HemisphereWitness hemisphere_witness(const CapBody& body);

/// Exact minimum of <p, w> over the body (attained on the boundary).
double hemisphere_margin(const CapBody& body, const BoundaryStructure& boundary, const Vec3& w);

/// Deterministic test-corpus body: k caps with poles within `spread` of
/// the north pole and radii in [0.6, pi/2). Redrawn until the body is
/// valid, certifiably in an open hemisphere and not a single ball.
CapBody random_body(std::uint64_t seed, int k, double spread);

/// Uniform sample of the body by rejection from its witness hemisphere.
std::vector<Vec3> sample_interior(const CapBody& body, int count, std::uint64_t seed);

/// Number of sampled pairs whose geodesic midpoint leaves the body.
int midpoint_convexity_violations(const CapBody& body, int pairs, std::uint64_t seed);

/// Text records `pole_x pole_y pole_z rho`, one per line; '#' starts a comment.
CapBody read_body(std::istream& in);
CapBody read_body_file(const std::string& path);
void write_body(std::ostream& out, const CapBody& body);

}  // namespace sphrobin
