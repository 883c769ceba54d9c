#include "sphrobin/radial_eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sphrobin/error.hpp"
#include "sphrobin/spaceform.hpp"

namespace sphrobin {

namespace {

constexpr double kSeriesStart = 1e-6;
constexpr double kRescaleAbove = 1e150;
constexpr double kBisectionTol = 1e-10;
constexpr double kBracketLimit = 1e6;

struct State {
  double psi;
  double dpsi;
};

State rhs(int n, double lambda, double r, const State& y) {
  return {y.dpsi, -(n - 1) * (std::cos(r) / std::sin(r)) * y.dpsi - lambda * y.psi};
}

State rk4_step(int n, double lambda, double r, const State& y, double h) {
  const State k1 = rhs(n, lambda, r, y);
  const State k2 = rhs(n, lambda, r + 0.5 * h, {y.psi + 0.5 * h * k1.psi, y.dpsi + 0.5 * h * k1.dpsi});
  const State k3 = rhs(n, lambda, r + 0.5 * h, {y.psi + 0.5 * h * k2.psi, y.dpsi + 0.5 * h * k2.dpsi});
  const State k4 = rhs(n, lambda, r + h, {y.psi + h * k3.psi, y.dpsi + h * k3.dpsi});
  return {y.psi + h / 6.0 * (k1.psi + 2.0 * k2.psi + 2.0 * k3.psi + k4.psi),
          y.dpsi + h / 6.0 * (k1.dpsi + 2.0 * k2.dpsi + 2.0 * k3.dpsi + k4.dpsi)};
}

// Integrates on the uniform grid r_k = k h. The first interval starts from
// the two-term series at r = 1e-6. When `trajectory` is non-null the samples
// are stored (no rescaling is allowed in that mode).
ShotResult integrate_radial(const RobinBallProblem& p, double lambda,
                            std::vector<State>* trajectory) {
  const int n = p.dim;
  const double h = p.radius / p.steps;
  State y{1.0 - lambda * kSeriesStart * kSeriesStart / (2.0 * n), -lambda * kSeriesStart / n};
  if (trajectory) {
    trajectory->assign(1, State{1.0, 0.0});
    trajectory->reserve(p.steps + 1);
  }
  ShotResult out;
  bool rescaled = false;
  double previous = 1.0;
  double r = kSeriesStart;
  for (int k = 1; k <= p.steps; ++k) {
    const double r_next = k * h;
    y = rk4_step(n, lambda, r, y, r_next - r);
    r = r_next;
    if (!std::isfinite(y.psi) || !std::isfinite(y.dpsi)) {
      throw SolverError("radial shooting produced a non-finite value");
    }
    if (y.psi * previous < 0.0) ++out.sign_changes;
    if (y.psi != 0.0) previous = y.psi;
    if (trajectory) {
      trajectory->push_back(y);
    } else if (std::abs(y.psi) + std::abs(y.dpsi) > kRescaleAbove) {
      y.psi /= kRescaleAbove;
      y.dpsi /= kRescaleAbove;
      rescaled = true;
    }
  }
  const double residual = y.dpsi + p.beta * y.psi;
  if (rescaled) {
    out.saturated = true;
    out.residual = std::copysign(std::numeric_limits<double>::max(), residual);
  } else {
    out.residual = residual;
  }
  return out;
}

double hermite(double t, double h, double y0, double y1, double d0, double d1) {
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * d0 + (-2 * t3 + 3 * t2) * y1 +
         (t3 - t2) * h * d1;
}

}  // namespace

void RobinBallProblem::validate() const {
  if (dim < 2) throw PreconditionError("ball dimension must be at least 2");
  if (!(radius > 0.0 && radius <= kPi / 2)) {
    throw GeometryError("ball radius " + std::to_string(radius) +
                        " outside the strong-convexity range (0, pi/2]");
  }
  if (!std::isfinite(beta)) throw PreconditionError("Robin parameter must be finite");
  if (steps < 16) throw PreconditionError("radial solver needs at least 16 steps");
}

ShotResult shoot_detailed(const RobinBallProblem& problem, double lambda) {
  problem.validate();
  return integrate_radial(problem, lambda, nullptr);
}

double shoot(const RobinBallProblem& problem, double lambda) {
  return shoot_detailed(problem, lambda).residual;
}

RadialEigenpair first_eigenvalue(const RobinBallProblem& problem) {
  problem.validate();

  // Below the first eigenvalue psi is positive and F > 0; both facts are
  // required of the lower bracket so that a higher mode is never picked up.
  auto below_first = [&](double lambda) {
    const ShotResult s = shoot_detailed(problem, lambda);
    return s.residual > 0.0 && s.sign_changes == 0;
  };

  double root = 0.0;
  const double f0 = shoot(problem, 0.0);
  if (f0 != 0.0) {
    double lower = 0.0;
    if (f0 < 0.0) {
      double step = 1.0;
      int taken = 0;
      while (!below_first(lower)) {
        lower -= step;
        if (++taken > 64) step *= 2.0;
        if (lower < -kBracketLimit) {
          throw SolverError("no lower bracket for the first Robin eigenvalue");
        }
      }
    } else if (!below_first(0.0)) {
      throw SolverError("psi changes sign at lambda = 0 with F(0) > 0");
    }

    double lo = lower;
    double hi = lower + 1.0;
    double f_hi = shoot(problem, hi);
    while (f_hi > 0.0) {
      lo = hi;
      hi += 1.0;
      if (hi > kBracketLimit) throw SolverError("no upper bracket for the first Robin eigenvalue");
      f_hi = shoot(problem, hi);
    }
    while (hi - lo > kBisectionTol) {
      const double mid = 0.5 * (lo + hi);
      const double f = shoot(problem, mid);
      if (f > 0.0) {
        lo = mid;
      } else if (f < 0.0) {
        hi = mid;
      } else {
        lo = hi = mid;
      }
    }
    root = 0.5 * (lo + hi);
  }

  std::vector<State> trajectory;
  integrate_radial(problem, root, &trajectory);

  RadialEigenpair pair;
  pair.dim = problem.dim;
  pair.lambda = root;
  const int m = problem.steps;
  const double h = problem.radius / m;
  pair.grid.resize(m + 1);
  pair.psi.resize(m + 1);
  pair.dpsi.resize(m + 1);
  pair.phi.resize(m + 1);
  for (int k = 0; k <= m; ++k) {
    pair.grid[k] = k * h;
    pair.psi[k] = trajectory[k].psi;
    pair.dpsi[k] = trajectory[k].dpsi;
  }
  pair.grid[m] = problem.radius;
  for (int k = 0; k <= m; ++k) pair.phi[k] = pair.psi[m - k];
  if (*std::min_element(pair.psi.begin(), pair.psi.end()) <= 0.0) {
    throw SolverError("first eigenfunction candidate is not positive");
  }
  return pair;
}

double RadialEigenpair::phi_at(double rho) const {
  const int m = static_cast<int>(grid.size()) - 1;
  const double radius_ = grid.back();
  const double h = radius_ / m;
  const double r = std::clamp(radius_ - rho, 0.0, radius_);
  const int k = std::min(m - 1, static_cast<int>(r / h));
  return hermite((r - grid[k]) / h, h, psi[k], psi[k + 1], dpsi[k], dpsi[k + 1]);
}

double RadialEigenpair::dphi_at(double rho) const {
  const int m = static_cast<int>(grid.size()) - 1;
  const double radius_ = grid.back();
  const double h = radius_ / m;
  const double r = std::clamp(radius_ - rho, 0.0, radius_);
  const int k = std::min(m - 1, static_cast<int>(r / h));
  auto second = [&](int i) {
    if (i == 0) return -lambda / dim;
    return -(dim - 1) * std::cos(grid[i]) / std::sin(grid[i]) * dpsi[i] - lambda * psi[i];
  };
  return -hermite((r - grid[k]) / h, h, dpsi[k], dpsi[k + 1], second(k), second(k + 1));
}

EigenfunctionStats u_min_and_l2(const RadialEigenpair& pair, const RobinBallProblem& problem) {
  const double weight = sigma(problem.dim);
  EigenfunctionStats stats;
  stats.u_min = *std::min_element(pair.psi.begin(), pair.psi.end());
  double sum = 0.0;
  const std::size_t m = pair.grid.size();
  auto integrand = [&](std::size_t i) {
    return pair.psi[i] * pair.psi[i] * weight * std::pow(std::sin(pair.grid[i]), problem.dim - 1);
  };
  for (std::size_t i = 0; i + 1 < m; ++i) {
    sum += 0.5 * (pair.grid[i + 1] - pair.grid[i]) * (integrand(i) + integrand(i + 1));
  }
  stats.l2sq = sum;
  return stats;
}

}  // namespace sphrobin
