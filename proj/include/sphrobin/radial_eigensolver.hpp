#pragma once

// First Robin eigenvalue of a geodesic ball in S^n by shooting on the
// radial ODE  psi'' + (n-1) cot(r) psi' + lambda psi = 0,
// psi'(0) = 0,  psi'(R) + beta psi(R) = 0.

#include <vector>

namespace sphrobin {

struct RobinBallProblem {
  int dim = 2;
  double radius = 1.0;
  double beta = 0.0;
  int steps = 4096;  // RK4 steps on [0, R]

  void validate() const;
};

/// Solved radial eigenpair, normalized by psi(0) = 1. The grid is uniform
/// with spacing R / steps; phi is psi read from the boundary inward.
struct RadialEigenpair {
  double lambda = 0.0;
  std::vector<double> grid;
  std::vector<double> psi;
  std::vector<double> dpsi;
  std::vector<double> phi;

  double radius() const { return grid.back(); }

  /// phi(rho) = psi(R - rho) and its rho-derivative, by cubic Hermite
  /// interpolation using the ODE for the second derivative.
  double phi_at(double rho) const;
  double dphi_at(double rho) const;

  int dim = 2;
};

struct ShotResult {
  double residual = 0.0;  // psi'(R) + beta psi(R)
  int sign_changes = 0;   // zeros of psi on (0, R]
  bool saturated = false;
};

/// Boundary residual F(lambda) from the series start at r = 1e-6.
double shoot(const RobinBallProblem& problem, double lambda);

/// As shoot(), plus the zero count of psi used to certify the first mode.
ShotResult shoot_detailed(const RobinBallProblem& problem, double lambda);

/// Smallest root of F, bisected to 1e-10, with psi sampled on the grid.
RadialEigenpair first_eigenvalue(const RobinBallProblem& problem);

struct EigenfunctionStats {
  double u_min = 0.0;  // min of psi over the closed ball
  double l2sq = 0.0;   // int_D u^2
};

EigenfunctionStats u_min_and_l2(const RadialEigenpair& pair, const RobinBallProblem& problem);

}  // namespace sphrobin
