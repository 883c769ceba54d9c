#pragma once

// Perimeter profiles of inner parallel sets, the perimeter differential
// inequality, an ODE comparison solver and the transplanted test-function
// pipelines comparing a cap body with the ball of equal perimeter.

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "sphrobin/convex_body.hpp"
#include "sphrobin/radial_eigensolver.hpp"
#include "sphrobin/report.hpp"

namespace sphrobin {

struct PerimeterProfile {
  double inradius = 0.0;
  std::vector<double> ts;  // uniform, t_0 = 0, t_K = R_Omega (1 - 1e-6)
  std::vector<double> ps;  // P(Omega_t)

  double step() const { return ts[1] - ts[0]; }
  /// 10 max(dt^2, 1e-10): one-sided difference error of an exact profile.
  double grid_tolerance() const;
};

PerimeterProfile perimeter_profile(const CapBody& body, int cells);

/// Right side of the perimeter inequality,
/// (n-1) (sigma_n^{2/(n-1)} P^{2(n-2)/(n-1)} - P^2)^{1/2}, radicand clamped at 0.
double perimeter_ode_rhs(double perimeter, int n = 2);

struct OdeResiduals {
  std::vector<double> slope;     // -(P_{k+1} - P_k) / dt
  std::vector<double> bound;     // rhs at the cell-midpoint average
  std::vector<double> residual;  // slope - bound
  double tolerance = 0.0;
};

OdeResiduals ode_residuals(const PerimeterProfile& profile, int n = 2);

/// Cellwise check of -dP/dt >= rhs(P) - tol. At most two isolated flagged
/// cells (kinks where a constraint drops out) are reported but tolerated.
VerificationReport ode_inequality_check(const PerimeterProfile& profile, int n = 2);

struct FieldValue {
  double value = 0.0;
  bool clamped = false;
};
using ScalarField = std::function<FieldValue(double)>;

/// g -> -sqrt(4 pi^2 - g^2), clamped to 0 where the radicand is negative.
ScalarField isoperimetric_field();

struct ComparisonResult {
  std::vector<double> g;
  bool verdict = false;
  double max_excess = 0.0;  // max_k f(t_k) - g(t_k)
  bool clamped = false;
};

/// Integrates g' = F(g), g(t_0) = g0 on the grid of f with RK4 (`substeps`
/// per cell) and checks f <= g + tol at every node.
ComparisonResult comparison_solve(std::span<const double> ts, std::span<const double> f,
                                  const ScalarField& field, double g0, double tol = 1e-8,
                                  int substeps = 4);

struct TransplantOptions {
  int profile_cells = 4096;
  int ball_steps = 4096;
};

struct Transplant {
  double rq = 0.0;
  double lambda_ball = 0.0;
  double ball_radius = 0.0;
  double body_perimeter = 0.0;
  double gradient_body = 0.0;  // int_0^{R_Omega} phi'^2 P(Omega_t)
  double gradient_ball = 0.0;  // int_0^{R_Omega} phi'^2 P(D_t)
  double mass_body = 0.0;      // int_0^{R_Omega} phi^2 P(Omega_t)
  double boundary_term = 0.0;  // beta phi(0)^2 P(Omega)
  PerimeterProfile profile;
  RadialEigenpair pair;
};

/// Rayleigh quotient of v = phi(d(., boundary)), phi the radial profile of
/// the first eigenfunction of the ball D with P(D) = P(body).
Transplant transplant_rayleigh(const CapBody& body, double beta,
                               const TransplantOptions& options = {});

struct PipelineOptions {
  TransplantOptions transplant;
  double rq_tol = 1e-6;
  double equality_tol = 1e-8;
  /// FEM estimate of the body eigenvalue and its calibrated relative
  /// tolerance (the ball error observed at the same refinement level).
  std::optional<double> fem_lambda;
  double fem_tol = 0.0;
};

/// Area/inradius comparison, profile domination, gradient-term comparison
/// and rq <= lambda(D). Requires beta < 0 and a certified body.
VerificationReport thm1_verify(const CapBody& body, double beta, const PipelineOptions& options = {});

/// Volume-deficit refinement: rq <= lambda(D) / (1 - c dV) with
/// c = u_m^2 / |u|^2 and dV = |D| - |Omega|.
VerificationReport thm2_verify(const CapBody& body, double beta, const PipelineOptions& options = {});

}  // namespace sphrobin
