#include "sphrobin/discrete_robin.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "sphrobin/error.hpp"
#include "sphrobin/spaceform.hpp"

namespace sphrobin {

namespace {

constexpr double kBoundarySpacing = 0.2;
constexpr int kMinBoundaryPoints = 16;
constexpr double kEigenTol = 1e-10;
constexpr int kMaxIterations = 5000;
constexpr std::size_t kDenseLimit = 400;

using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplets = std::vector<Eigen::Triplet<double>>;

struct Assembly {
  SparseMatrix stiffness;
  SparseMatrix mass;
  SparseMatrix boundary;
};

Assembly assemble(const GeodesicMesh& mesh) {
  const int n = static_cast<int>(mesh.vertices.size());
  Triplets k_entries;
  Triplets m_entries;
  Triplets b_entries;
  for (const auto& tri : mesh.triangles) {
    const Vec3 x[3] = {mesh.vertices[tri[0]], mesh.vertices[tri[1]], mesh.vertices[tri[2]]};
    const double area = 0.5 * (x[1] - x[0]).cross(x[2] - x[0]).norm();
    // Edge opposite vertex i; gradients of the hat functions are rotations of these.
    const Vec3 e[3] = {x[2] - x[1], x[0] - x[2], x[1] - x[0]};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        k_entries.emplace_back(tri[i], tri[j], e[i].dot(e[j]) / (4.0 * area));
        m_entries.emplace_back(tri[i], tri[j], area / 12.0 * (i == j ? 2.0 : 1.0));
      }
    }
  }
  for (const auto& edge : mesh.boundary_edges) {
    const double l = edge.length;
    b_entries.emplace_back(edge.a, edge.a, l / 3.0);
    b_entries.emplace_back(edge.b, edge.b, l / 3.0);
    b_entries.emplace_back(edge.a, edge.b, l / 6.0);
    b_entries.emplace_back(edge.b, edge.a, l / 6.0);
  }
  Assembly out{SparseMatrix(n, n), SparseMatrix(n, n), SparseMatrix(n, n)};
  out.stiffness.setFromTriplets(k_entries.begin(), k_entries.end());
  out.mass.setFromTriplets(m_entries.begin(), m_entries.end());
  out.boundary.setFromTriplets(b_entries.begin(), b_entries.end());
  return out;
}

struct Builder {
  GeodesicMesh mesh;
  std::vector<bool> on_boundary;

  int add(const Vec3& p, bool boundary) {
    mesh.vertices.push_back(p);
    on_boundary.push_back(boundary);
    return static_cast<int>(mesh.vertices.size()) - 1;
  }
};

}  // namespace

GeodesicMesh mesh_body(const CapBody& body, int level) {
  if (level < 0 || level > 6) throw PreconditionError("mesh level must lie in [0, 6]");
  const BoundaryStructure boundary = boundary_structure(body);
  const auto& caps = body.constraints();

  double total = 0.0;
  for (const auto& arc : boundary.arcs) total += arc.length;
  double spacing = std::min(kBoundarySpacing, total / kMinBoundaryPoints);

  Builder b;
  const int center = b.add(body.incenter(), false);
  // Boundary polyline; each arc starts at a corner, so corners are kept exactly.
  struct Node {
    int vertex;
    int arc;
    double theta;
  };
  std::vector<Node> ring;
  for (std::size_t a = 0; a < boundary.arcs.size(); ++a) {
    const BoundaryArc& arc = boundary.arcs[a];
    const int segments = std::max(1, static_cast<int>(std::ceil(arc.length / spacing - 1e-9)));
    for (int s = 0; s < segments; ++s) {
      const double theta = arc.theta_begin + arc.sweep() * s / segments;
      ring.push_back({b.add(arc_point(body, arc, theta), true), static_cast<int>(a), theta});
    }
  }
  const int count = static_cast<int>(ring.size());
  for (int i = 0; i < count; ++i) {
    const Node& p = ring[i];
    const Node& q = ring[(i + 1) % count];
    // The edge runs along p's arc; q may be the first node of the next arc.
    const BoundaryArc& arc = boundary.arcs[p.arc];
    const double theta_end = q.arc == p.arc && i + 1 < count ? q.theta : arc.theta_end;
    b.mesh.triangles.push_back({center, p.vertex, q.vertex});
    b.mesh.boundary_edges.push_back({p.vertex, q.vertex, 0.0, p.arc, p.theta, theta_end});
  }

  for (int pass = 0; pass < level; ++pass) {
    std::map<std::pair<int, int>, int> midpoint;
    std::map<std::pair<int, int>, const BoundaryEdge*> boundary_lookup;
    for (const auto& e : b.mesh.boundary_edges) {
      boundary_lookup[{std::min(e.a, e.b), std::max(e.a, e.b)}] = &e;
    }
    std::vector<BoundaryEdge> new_boundary;
    auto mid = [&](int i, int j) {
      const std::pair<int, int> key{std::min(i, j), std::max(i, j)};
      if (auto it = midpoint.find(key); it != midpoint.end()) return it->second;
      int index;
      if (auto it = boundary_lookup.find(key); it != boundary_lookup.end()) {
        const BoundaryEdge& e = *it->second;
        const double theta = 0.5 * (e.theta_a + e.theta_b);
        index = b.add(caps[boundary.arcs[e.arc].constraint].circle_point(theta), true);
        new_boundary.push_back({e.a, index, 0.0, e.arc, e.theta_a, theta});
        new_boundary.push_back({index, e.b, 0.0, e.arc, theta, e.theta_b});
      } else {
        index = b.add((b.mesh.vertices[i] + b.mesh.vertices[j]).normalized(), false);
      }
      midpoint.emplace(key, index);
      return index;
    };
    std::vector<std::array<int, 3>> refined;
    refined.reserve(4 * b.mesh.triangles.size());
    for (const auto& t : b.mesh.triangles) {
      const int ab = mid(t[0], t[1]);
      const int bc = mid(t[1], t[2]);
      const int ca = mid(t[2], t[0]);
      refined.push_back({t[0], ab, ca});
      refined.push_back({ab, t[1], bc});
      refined.push_back({ca, bc, t[2]});
      refined.push_back({ab, bc, ca});
    }
    b.mesh.triangles = std::move(refined);
    b.mesh.boundary_edges = std::move(new_boundary);
  }

  for (auto& e : b.mesh.boundary_edges) {
    e.length = std::sin(caps[boundary.arcs[e.arc].constraint].rho) * std::abs(e.theta_b - e.theta_a);
  }
  for (const auto& t : b.mesh.triangles) {
    const Vec3& x0 = b.mesh.vertices[t[0]];
    const Vec3& x1 = b.mesh.vertices[t[1]];
    const Vec3& x2 = b.mesh.vertices[t[2]];
    if ((x1 - x0).cross(x2 - x0).dot(x0 + x1 + x2) <= 0.0) {
      throw GeometryError("mesh triangle with non-positive orientation");
    }
    b.mesh.h = std::max({b.mesh.h, (x1 - x0).norm(), (x2 - x1).norm(), (x0 - x2).norm()});
  }
  b.mesh.level = level;
  return b.mesh;
}

double mesh_area(const GeodesicMesh& mesh) {
  double total = 0.0;
  for (const auto& t : mesh.triangles) {
    total += 0.5 * (mesh.vertices[t[1]] - mesh.vertices[t[0]])
                       .cross(mesh.vertices[t[2]] - mesh.vertices[t[0]])
                       .norm();
  }
  return total;
}

double mesh_boundary_length(const GeodesicMesh& mesh) {
  double total = 0.0;
  for (const auto& e : mesh.boundary_edges) total += e.length;
  return total;
}

DiscreteEigResult assemble_and_solve(const GeodesicMesh& mesh, double beta) {
  if (mesh.triangles.empty()) throw PreconditionError("empty mesh");
  const Assembly parts = assemble(mesh);
  const SparseMatrix a = parts.stiffness + beta * parts.boundary;
  const SparseMatrix& m = parts.mass;
  const std::size_t n = mesh.vertices.size();

  DiscreteEigResult result;
  result.refinement_level = mesh.level;
  result.dofs = n;

  auto residual_of = [&](const Eigen::VectorXd& x, double lambda) {
    const Eigen::VectorXd mx = m * x;
    return (a * x - lambda * mx).norm() / mx.norm();
  };

  if (n <= kDenseLimit) {
    const Eigen::MatrixXd dense_a(a);
    const Eigen::MatrixXd dense_m(m);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense_a, dense_m);
    if (solver.info() != Eigen::Success) throw SolverError("dense generalized eigensolver failed");
    result.lambda_h = solver.eigenvalues()(0);
    result.residual = residual_of(solver.eigenvectors().col(0), result.lambda_h);
    return result;
  }

  // The constant function gives lambda <= beta P / |Omega|; start one below
  // that and lower the shift until the shifted matrix has no negative pivots.
  const double upper = beta * mesh_boundary_length(mesh) / mesh_area(mesh);
  double shift = std::min(0.0, upper) - 1.0;
  Eigen::SimplicialLDLT<SparseMatrix> factor;
  for (int attempt = 0;; ++attempt) {
    if (attempt > 60) throw SolverError("could not find a shift below the spectrum");
    factor.compute(SparseMatrix(a - shift * m));
    if (factor.info() == Eigen::Success && (factor.vectorD().array() > 0.0).all()) break;
    shift = 2.0 * shift - 1.0;
  }
  result.shift = shift;

  Eigen::VectorXd x = Eigen::VectorXd::Ones(n);
  x /= std::sqrt(x.dot(m * x));
  double lambda = x.dot(a * x);
  for (int it = 1; it <= kMaxIterations; ++it) {
    Eigen::VectorXd y = factor.solve(m * x);
    if (factor.info() != Eigen::Success) throw SolverError("shifted solve failed");
    y /= std::sqrt(y.dot(m * y));
    x = std::move(y);
    lambda = x.dot(a * x);
    const double residual = residual_of(x, lambda);
    result.iterations = it;
    if (residual <= kEigenTol * std::max(1.0, std::abs(lambda))) {
      result.lambda_h = lambda;
      result.residual = residual;
      return result;
    }
  }
  throw SolverError("inverse iteration did not converge");
}

void write_mesh(std::ostream& out, const GeodesicMesh& mesh) {
  const auto precision = out.precision();
  out.precision(17);
  for (const auto& v : mesh.vertices) out << "v " << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  for (const auto& t : mesh.triangles) {
    out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
  }
  for (const auto& e : mesh.boundary_edges) out << "b " << e.a + 1 << ' ' << e.b + 1 << '\n';
  out.precision(precision);
}

}  // namespace sphrobin

#include "sphrobin/radial_eigensolver.hpp"

namespace sphrobin {

FemEstimate fem_estimate(const CapBody& body, double beta, int level) {
  FemEstimate out;
  out.level = level;
  out.lambda_h = assemble_and_solve(mesh_body(body, level), beta).lambda_h;
  const double radius = radius_from_perimeter(2, perimeter(body));
  const double exact = first_eigenvalue({2, radius, beta}).lambda;
  const double ball_h = assemble_and_solve(mesh_body(ball_body(Vec3::UnitZ(), radius), level), beta).lambda_h;
  out.ball_relative_error = std::abs(ball_h - exact) / std::max(std::abs(exact), 1e-12);
  return out;
}

}  // namespace sphrobin
