#include "sphrobin/parallel_coordinates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "sphrobin/error.hpp"
#include "sphrobin/spaceform.hpp"

namespace sphrobin {

namespace {

constexpr double kProfileShrink = 1e-6;
constexpr int kConvexityPairs = 1000;

// Composite Simpson on a uniform grid with an even cell count; the last
// cell falls back to the trapezoid rule when the count is odd.
template <class F>
double integrate_on_grid(const std::vector<double>& ts, F&& f) {
  const std::size_t cells = ts.size() - 1;
  const std::size_t even = cells - cells % 2;
  double sum = 0.0;
  for (std::size_t k = 0; k < even; k += 2) {
    sum += (ts[k + 2] - ts[k]) / 6.0 * (f(k) + 4.0 * f(k + 1) + f(k + 2));
  }
  if (even < cells) sum += 0.5 * (ts[cells] - ts[even]) * (f(even) + f(cells));
  return sum;
}

}  // namespace

double PerimeterProfile::grid_tolerance() const {
  const double dt = step();
  return 10.0 * std::max(dt * dt, 1e-10);
}

PerimeterProfile perimeter_profile(const CapBody& body, int cells) {
  if (cells < 64) throw PreconditionError("perimeter profile needs at least 64 cells");
  PerimeterProfile profile;
  profile.inradius = body.inradius();
  const double end = profile.inradius * (1.0 - kProfileShrink);
  profile.ts.resize(cells + 1);
  profile.ps.resize(cells + 1);
  for (int k = 0; k <= cells; ++k) {
    const double t = end * k / cells;
    profile.ts[k] = t;
    profile.ps[k] = perimeter(k == 0 ? body : inner_parallel(body, t));
  }
  return profile;
}

double perimeter_ode_rhs(double perimeter, int n) {
  if (n < 2) throw PreconditionError("dimension must be at least 2");
  const double e = 1.0 / (n - 1);
  const double radicand =
      std::pow(sigma(n), 2.0 * e) * std::pow(perimeter, 2.0 * (n - 2) * e) - perimeter * perimeter;
  return (n - 1) * std::sqrt(std::max(0.0, radicand));
}

OdeResiduals ode_residuals(const PerimeterProfile& profile, int n) {
  OdeResiduals out;
  out.tolerance = profile.grid_tolerance();
  for (std::size_t k = 0; k + 1 < profile.ts.size(); ++k) {
    const double dt = profile.ts[k + 1] - profile.ts[k];
    const double slope = -(profile.ps[k + 1] - profile.ps[k]) / dt;
    const double bound = perimeter_ode_rhs(0.5 * (profile.ps[k] + profile.ps[k + 1]), n);
    out.slope.push_back(slope);
    out.bound.push_back(bound);
    out.residual.push_back(slope - bound);
  }
  return out;
}

VerificationReport ode_inequality_check(const PerimeterProfile& profile, int n) {
  const OdeResiduals r = ode_residuals(profile, n);
  VerificationReport report;
  report.name = "perimeter differential inequality";
  std::vector<std::size_t> flagged;
  std::size_t worst = 0;
  for (std::size_t k = 0; k < r.residual.size(); ++k) {
    if (r.residual[k] < -r.tolerance) flagged.push_back(k);
    if (r.residual[k] < r.residual[worst]) worst = k;
  }
  bool isolated = flagged.size() <= 2;
  for (std::size_t i = 1; i < flagged.size(); ++i) {
    if (flagged[i] == flagged[i - 1] + 1) isolated = false;
  }
  const bool worst_ok = r.residual[worst] >= -r.tolerance || isolated;
  report.add("-dP/dt >= rhs(P) at the worst cell", r.slope[worst], r.bound[worst],
             r.residual[worst], worst_ok);
  report.add("flagged cells are at most 2 and isolated", static_cast<double>(flagged.size()), 2.0,
             2.0 - static_cast<double>(flagged.size()), isolated);
  for (std::size_t k : flagged) {
    report.notes.push_back("flagged cell " + std::to_string(k) + " at t = " +
                           std::to_string(profile.ts[k]) + ", residual " +
                           std::to_string(r.residual[k]));
  }
  report.values = {{"tolerance", r.tolerance},
                   {"cells", static_cast<double>(r.residual.size())},
                   {"min_residual", r.residual[worst]}};
  return report;
}

ScalarField isoperimetric_field() {
  return [](double g) {
    const double radicand = 4.0 * kPi * kPi - g * g;
    if (radicand < 0.0) return FieldValue{0.0, true};
    return FieldValue{-std::sqrt(radicand), false};
  };
}

ComparisonResult comparison_solve(std::span<const double> ts, std::span<const double> f,
                                  const ScalarField& field, double g0, double tol, int substeps) {
  if (ts.size() != f.size() || ts.size() < 2) {
    throw PreconditionError("comparison needs matching grids with at least two nodes");
  }
  if (g0 < f[0]) throw PreconditionError("comparison requires g(a) >= f(a)");
  if (substeps < 1) throw PreconditionError("substeps must be positive");
  ComparisonResult out;
  out.g.resize(ts.size());
  out.g[0] = g0;
  auto eval = [&](double g) {
    const FieldValue v = field(g);
    out.clamped = out.clamped || v.clamped;
    return v.value;
  };
  double g = g0;
  for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
    const double h = (ts[k + 1] - ts[k]) / substeps;
    for (int s = 0; s < substeps; ++s) {
      const double k1 = eval(g);
      const double k2 = eval(g + 0.5 * h * k1);
      const double k3 = eval(g + 0.5 * h * k2);
      const double k4 = eval(g + h * k3);
      g += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    out.g[k + 1] = g;
  }
  out.max_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < ts.size(); ++k) out.max_excess = std::max(out.max_excess, f[k] - out.g[k]);
  out.verdict = out.max_excess <= tol;
  return out;
}

Transplant transplant_rayleigh(const CapBody& body, double beta, const TransplantOptions& options) {
  Transplant out;
  out.body_perimeter = perimeter(body);
  out.ball_radius = radius_from_perimeter(2, out.body_perimeter);
  const RobinBallProblem problem{2, out.ball_radius, beta, options.ball_steps};
  out.pair = first_eigenvalue(problem);
  out.lambda_ball = out.pair.lambda;
  out.profile = perimeter_profile(body, options.profile_cells);

  const auto& ts = out.profile.ts;
  const auto& ps = out.profile.ps;
  const double radius = out.ball_radius;
  std::vector<double> phi(ts.size());
  std::vector<double> dphi(ts.size());
  for (std::size_t k = 0; k < ts.size(); ++k) {
    phi[k] = out.pair.phi_at(ts[k]);
    dphi[k] = out.pair.dphi_at(ts[k]);
  }
  out.gradient_body = integrate_on_grid(ts, [&](std::size_t k) { return dphi[k] * dphi[k] * ps[k]; });
  out.gradient_ball = integrate_on_grid(ts, [&](std::size_t k) {
    return dphi[k] * dphi[k] * ball_perimeter(2, radius - ts[k]);
  });
  out.mass_body = integrate_on_grid(ts, [&](std::size_t k) { return phi[k] * phi[k] * ps[k]; });

  // The boundary integrals over the body and over the ball coincide because
  // both boundaries sit at distance 0 and the perimeters are equal.
  const double phi0_sq = phi.front() * phi.front();
  out.boundary_term = beta * phi0_sq * out.body_perimeter;
  const double ball_boundary = beta * phi0_sq * ball_perimeter(2, radius);
  if (std::abs(out.boundary_term - ball_boundary) > 1e-9 * (1.0 + std::abs(ball_boundary))) {
    throw std::logic_error("boundary term of the transplanted function differs from the ball's");
  }
  out.rq = (out.gradient_body + out.boundary_term) / out.mass_body;
  return out;
}

namespace {

void require_negative_beta(double beta) {
  if (!(beta < 0.0)) throw PreconditionError("the comparison pipelines require beta < 0");
}

void certify(const CapBody& body, VerificationReport& report) {
  const HemisphereWitness w = hemisphere_witness(body);
  const int violations = midpoint_convexity_violations(body, kConvexityPairs, 7);
  report.add("midpoint convexity on sampled pairs", violations, 0.0, -violations, violations == 0);
  report.values.push_back({"hemisphere_margin", w.margin});
}

}  // namespace

VerificationReport thm1_verify(const CapBody& body, double beta, const PipelineOptions& options) {
  require_negative_beta(beta);
  VerificationReport report;
  report.name = "ball maximizes the Robin eigenvalue at fixed perimeter";
  certify(body, report);

  const Transplant tr = transplant_rayleigh(body, beta, options.transplant);
  const double body_area = area(body);
  const double ball_area = ball_volume(2, tr.ball_radius);
  const double r_omega = body.inradius();
  const PerimeterProfile& profile = tr.profile;
  const double tol_grid = profile.grid_tolerance();

  report.add_le("area(Omega) <= area(D)", body_area, ball_area, 1e-9);
  report.add_le("inradius(Omega) <= radius(D)", r_omega, tr.ball_radius, 1e-9);

  double min_gap = std::numeric_limits<double>::infinity();
  double max_abs_gap = 0.0;
  std::size_t worst = 0;
  for (std::size_t k = 0; k < profile.ts.size(); ++k) {
    const double ball_p = ball_perimeter(2, tr.ball_radius - profile.ts[k]);
    const double gap = ball_p - profile.ps[k];
    if (gap < min_gap) {
      min_gap = gap;
      worst = k;
    }
    max_abs_gap = std::max(max_abs_gap, std::abs(gap));
  }
  report.add("P(Omega_t) <= P(D_t) on the grid", profile.ps[worst],
             ball_perimeter(2, tr.ball_radius - profile.ts[worst]), min_gap, min_gap >= -tol_grid);
  report.add_le("int phi'^2 P(Omega_t) <= int phi'^2 P(D_t)", tr.gradient_body, tr.gradient_ball,
                1e-9 * (1.0 + std::abs(tr.gradient_ball)));
  report.add_le("rq(Omega) <= lambda(D)", tr.rq, tr.lambda_ball, options.rq_tol);

  const double eq = options.equality_tol;
  report.equality = std::abs(ball_area - body_area) <= eq && std::abs(tr.ball_radius - r_omega) <= eq &&
                    max_abs_gap <= eq &&
                    std::abs(tr.gradient_ball - tr.gradient_body) <= eq * (1.0 + tr.gradient_ball) &&
                    std::abs(tr.lambda_ball - tr.rq) <= options.rq_tol;

  report.values = {{"beta", beta},
                   {"perimeter", tr.body_perimeter},
                   {"area", body_area},
                   {"inradius", r_omega},
                   {"ball_radius", tr.ball_radius},
                   {"ball_area", ball_area},
                   {"lambda_ball", tr.lambda_ball},
                   {"rq", tr.rq},
                   {"min_profile_gap", min_gap},
                   {"tol_grid", tol_grid},
                   {"hemisphere_margin", report.value("hemisphere_margin")}};
  if (options.fem_lambda) {
    report.values.push_back({"lambda_fem", *options.fem_lambda});
    report.values.push_back({"fem_tol", options.fem_tol});
    const double eps_h = 2.0 * options.fem_tol * std::abs(*options.fem_lambda);
    report.values.push_back({"fem_eps", eps_h});
    report.add_le("lambda_h - eps_h <= rq", *options.fem_lambda - eps_h, tr.rq, 0.0);
  }
  return report;
}

VerificationReport thm2_verify(const CapBody& body, double beta, const PipelineOptions& options) {
  require_negative_beta(beta);
  VerificationReport report;
  report.name = "volume-deficit stability of the Robin eigenvalue";
  certify(body, report);

  const Transplant tr = transplant_rayleigh(body, beta, options.transplant);
  const RobinBallProblem problem{2, tr.ball_radius, beta, options.transplant.ball_steps};
  const EigenfunctionStats stats = u_min_and_l2(tr.pair, problem);
  const double body_area = area(body);
  const double ball_area = ball_volume(2, tr.ball_radius);
  const double c = stats.u_min * stats.u_min / stats.l2sq;
  const double deficit = ball_area - body_area;
  const double product = c * deficit;

  report.add("0 <= c dV", product, 0.0, product, product >= -1e-12);
  report.add("c dV < 1", product, 1.0, 1.0 - product, product < 1.0);
  const double bound = product < 1.0 ? tr.lambda_ball / (1.0 - product)
                                     : -std::numeric_limits<double>::infinity();
  report.add_le("rq(Omega) <= lambda(D) / (1 - c dV)", tr.rq, bound, options.rq_tol);

  report.values = {{"beta", beta},
                   {"perimeter", tr.body_perimeter},
                   {"area", body_area},
                   {"inradius", body.inradius()},
                   {"ball_radius", tr.ball_radius},
                   {"ball_area", ball_area},
                   {"lambda_ball", tr.lambda_ball},
                   {"rq", tr.rq},
                   {"u_min", stats.u_min},
                   {"u_l2sq", stats.l2sq},
                   {"c", c},
                   {"volume_deficit", deficit},
                   {"stability_lower_bound", product},
                   {"bound", bound}};
  if (options.fem_lambda) {
    const double lambda_h = *options.fem_lambda;
    const double ratio = (tr.lambda_ball - lambda_h) / std::abs(lambda_h);
    report.values.push_back({"lambda_fem", lambda_h});
    report.values.push_back({"fem_tol", options.fem_tol});
    report.values.push_back({"fem_stability_ratio", ratio});
    report.add("(lambda(D) - lambda_h)/|lambda_h| >= c dV - 2 fem_tol", ratio,
               product - 2.0 * options.fem_tol, ratio - (product - 2.0 * options.fem_tol),
               ratio >= product - 2.0 * options.fem_tol);
  }
  report.equality = std::abs(deficit) <= options.equality_tol &&
                    std::abs(tr.rq - tr.lambda_ball) <= options.rq_tol;
  return report;
}

}  // namespace sphrobin
