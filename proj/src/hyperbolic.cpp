#include "sphrobin/hyperbolic.hpp"

#include <cmath>
#include <string>

#include "sphrobin/error.hpp"

namespace sphrobin::hyperbolic {

namespace {

constexpr double kBoundaryTol = 1e-12;

double norm(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return std::sqrt(sum);
}

double hat_distance(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw PreconditionError("half-space points of different dimension");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(sum);
}

}  // namespace

void HalfSpacePoint::validate() const {
  if (!(xn > 0.0) || !std::isfinite(xn)) throw PreconditionError("half-space point needs x_n > 0");
  for (double x : xhat) {
    if (!std::isfinite(x)) throw PreconditionError("half-space point has a non-finite coordinate");
  }
}

double hyp_distance(const HalfSpacePoint& x, const HalfSpacePoint& y) {
  x.validate();
  y.validate();
  const double dh = hat_distance(x.xhat, y.xhat);
  const double euclid = std::hypot(dh, x.xn - y.xn);
  return 2.0 * std::asinh(euclid / (2.0 * std::sqrt(x.xn * y.xn)));
}

HalfSpacePoint geodesic_point(const HalfSpacePoint& p, const HalfSpacePoint& q, double s) {
  p.validate();
  q.validate();
  const double length = hat_distance(p.xhat, q.xhat);
  if (length == 0.0 && p.xn == q.xn) throw PreconditionError("geodesic endpoints coincide");
  if (!(s >= 0.0 && s <= 1.0)) throw PreconditionError("geodesic parameter must lie in [0, 1]");
  if (s == 0.0) return p;
  if (s == 1.0) return q;
  if (length == 0.0) {
    // Vertical geodesic: arc length is log-height.
    return {p.xhat, std::pow(p.xn, 1.0 - s) * std::pow(q.xn, s)};
  }
  // Work in the vertical plane through p and q with tau measured from p^.
  const double center = (length * length + q.xn * q.xn - p.xn * p.xn) / (2.0 * length);
  const double radius = std::hypot(center, p.xn);
  const double angle_p = std::atan2(p.xn, -center);
  const double angle_q = std::atan2(q.xn, length - center);
  // Arc length along the semicircle is log tan(angle / 2).
  const double u = (1.0 - s) * std::log(std::tan(0.5 * angle_p)) + s * std::log(std::tan(0.5 * angle_q));
  const double angle = 2.0 * std::atan(std::exp(u));
  const double tau = center + radius * std::cos(angle);
  HalfSpacePoint out;
  out.xhat.resize(p.xhat.size());
  for (std::size_t i = 0; i < p.xhat.size(); ++i) {
    out.xhat[i] = p.xhat[i] + tau * (q.xhat[i] - p.xhat[i]) / length;
  }
  out.xn = radius * std::sin(angle);
  return out;
}

bool tube_contains(const std::vector<double>& x0hat, double t, const HalfSpacePoint& x) {
  if (!(t >= 0.0)) throw PreconditionError("tube radius must be nonnegative");
  x.validate();
  const double bound = std::sinh(t) * x.xn;
  return hat_distance(x.xhat, x0hat) <= bound + kBoundaryTol * std::max(1.0, bound);
}

bool cone_contains(double delta, const HalfSpacePoint& x) {
  if (!(delta > 0.0)) throw PreconditionError("cone parameter delta must be positive");
  if (!(x.xn > 0.0)) return false;
  return norm(x.xhat) <= 1.0 - std::sinh(delta) * x.xn + kBoundaryTol;
}

bool cylinder_contains(const HalfSpacePoint& x) {
  return x.xn > 0.0 && norm(x.xhat) <= 1.0 + kBoundaryTol;
}

NonconvexityWitness nonconvexity_witness(double delta, int n, int scan_points) {
  if (!(delta > 0.0)) throw PreconditionError("delta must be positive");
  if (n < 2) throw PreconditionError("half-space dimension must be at least 2");
  if (scan_points < 3) throw PreconditionError("scan needs at least 3 points");
  const double sh = std::sinh(delta);
  NonconvexityWitness w;
  w.delta = delta;
  w.p = {std::vector<double>(n - 1, 0.0), 1.0 / sh};
  w.q = {std::vector<double>(n - 1, 0.0), 1.0 / (2.0 * sh)};
  w.q.xhat[0] = 0.5;
  w.endpoints_inside = cone_contains(delta, w.p) && cone_contains(delta, w.q);

  auto violation = [&](const HalfSpacePoint& g) { return norm(g.xhat) - (1.0 - sh * g.xn); };
  w.margin = -1.0;
  for (int i = 1; i + 1 < scan_points; ++i) {
    const double s = static_cast<double>(i) / (scan_points - 1);
    const HalfSpacePoint g = geodesic_point(w.p, w.q, s);
    const double v = violation(g);
    if (v > w.margin) {
      w.margin = v;
      w.s_star = s;
      w.violating_point = g;
    }
  }
  if (!(w.margin > 0.0)) {
    throw SolverError("no point of the geodesic leaves the cone at delta = " + std::to_string(delta));
  }
  return w;
}

}  // namespace sphrobin::hyperbolic
