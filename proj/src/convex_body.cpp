#include "sphrobin/convex_body.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "sphrobin/error.hpp"
#include "sphrobin/random.hpp"
#include "sphrobin/spaceform.hpp"

namespace sphrobin {

namespace {

constexpr double kTwoPi = 2.0 * kPi;
constexpr double kTangencyTol = 1e-10;
constexpr double kMinArcLength = 1e-11;
constexpr double kLinkTol = 1e-7;
constexpr double kInteriorTol = 1e-9;

double angle_between(const Vec3& a, const Vec3& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

// Minimum norm of a point x in R^3 with <x, pole_i> >= a_i for all i, or
// nullopt when the polyhedron is empty. The optimum is the projection of the
// origin onto the affine span of some active set of at most three
// constraints, so enumerating active sets is exact.
std::optional<Vec3> min_norm_feasible(const std::vector<CapConstraint>& caps,
                                      const std::vector<double>& bounds) {
  const int m = static_cast<int>(caps.size());
  auto feasible = [&](const Vec3& x) {
    for (int i = 0; i < m; ++i) {
      if (caps[i].pole.dot(x) < bounds[i] - 1e-13) return false;
    }
    return true;
  };
  std::optional<Vec3> best;
  auto consider = [&](const Vec3& x) {
    if (feasible(x) && (!best || x.squaredNorm() < best->squaredNorm())) best = x;
  };
  consider(Vec3::Zero());
  for (int i = 0; i < m; ++i) {
    consider(bounds[i] * caps[i].pole);
    for (int j = i + 1; j < m; ++j) {
      Eigen::Matrix<double, 2, 3> c;
      c.row(0) = caps[i].pole.transpose();
      c.row(1) = caps[j].pole.transpose();
      const Eigen::Matrix2d gram = c * c.transpose();
      if (std::abs(gram.determinant()) > 1e-14) {
        consider(c.transpose() * gram.inverse() * Eigen::Vector2d(bounds[i], bounds[j]));
      }
      for (int k = j + 1; k < m; ++k) {
        Eigen::Matrix3d c3;
        c3.row(0) = caps[i].pole.transpose();
        c3.row(1) = caps[j].pole.transpose();
        c3.row(2) = caps[k].pole.transpose();
        if (std::abs(c3.determinant()) > 1e-12) {
          consider(c3.inverse() * Eigen::Vector3d(bounds[i], bounds[j], bounds[k]));
        }
      }
    }
  }
  return best;
}

// With every shifted radius in [0, pi/2] the bounds are nonnegative, so the
// caps intersect on the sphere iff the polyhedron meets the unit ball.
std::optional<Vec3> shifted_feasible_point(const std::vector<CapConstraint>& caps, double t) {
  std::vector<double> bounds(caps.size());
  for (std::size_t i = 0; i < caps.size(); ++i) {
    if (caps[i].rho - t < 0.0) return std::nullopt;
    bounds[i] = std::cos(caps[i].rho - t);
  }
  const auto x = min_norm_feasible(caps, bounds);
  if (!x || x->norm() > 1.0) return std::nullopt;
  return x;
}

struct Incircle {
  Vec3 center;
  double radius;
};

Incircle locate_incircle(const std::vector<CapConstraint>& caps) {
  double lo = 0.0;
  double hi = kPi / 2;
  for (const auto& c : caps) hi = std::min(hi, c.rho);
  auto x = shifted_feasible_point(caps, lo);
  if (!x) throw GeometryError("cap intersection is empty");
  Vec3 witness = *x;
  if (auto top = shifted_feasible_point(caps, hi)) {
    lo = hi;
    witness = *top;
  }
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    if (auto point = shifted_feasible_point(caps, mid)) {
      lo = mid;
      witness = *point;
    } else {
      hi = mid;
    }
  }
  Vec3 center = witness.norm() > 0.0 ? witness.normalized() : caps.front().pole;
  return {center, lo};
}

using Interval = std::pair<double, double>;

std::vector<Interval> intersect(const std::vector<Interval>& a, const std::vector<Interval>& b) {
  std::vector<Interval> out;
  for (const auto& x : a) {
    for (const auto& y : b) {
      const double lo = std::max(x.first, y.first);
      const double hi = std::min(x.second, y.second);
      if (hi > lo) out.push_back({lo, hi});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Parameter set on circle i satisfying constraint j, or nullopt for "all".
std::optional<std::vector<Interval>> allowed_on_circle(const std::vector<CapConstraint>& caps,
                                                       int i, int j) {
  const CapConstraint& ci = caps[i];
  const CapConstraint& cj = caps[j];
  const double a = std::sin(ci.rho) * ci.frame_u().dot(cj.pole);
  const double b = std::sin(ci.rho) * ci.frame_v().dot(cj.pole);
  const double c = std::cos(cj.rho) - std::cos(ci.rho) * ci.pole.dot(cj.pole);
  const double amplitude = std::hypot(a, b);
  if (amplitude < 1e-13) {
    // Concentric circles: all or nothing; exact duplicates keep the lower index.
    if (std::abs(c) <= 1e-13) {
      if (j < i) return std::vector<Interval>{};
      return std::nullopt;
    }
    if (c > 0.0) return std::vector<Interval>{};
    return std::nullopt;
  }
  const double ratio = c / amplitude;
  if (std::abs(std::abs(ratio) - 1.0) <= kTangencyTol) {
    throw GeometryError("tangent cap boundaries (degenerate configuration)");
  }
  if (ratio >= 1.0) return std::vector<Interval>{};
  if (ratio <= -1.0) return std::nullopt;
  const double half = std::acos(ratio);
  double lo = std::atan2(b, a) - half;
  lo = std::fmod(lo, kTwoPi);
  if (lo < 0.0) lo += kTwoPi;
  const double hi = lo + 2.0 * half;
  if (hi <= kTwoPi) return std::vector<Interval>{{lo, hi}};
  return std::vector<Interval>{{0.0, hi - kTwoPi}, {lo, kTwoPi}};
}

double arc_min_of_linear(const CapConstraint& cap, const BoundaryArc& arc, const Vec3& w) {
  // <p(theta), w> = k + a cos(theta) + b sin(theta)
  const double k = std::cos(cap.rho) * cap.pole.dot(w);
  const double a = std::sin(cap.rho) * cap.frame_u().dot(w);
  const double b = std::sin(cap.rho) * cap.frame_v().dot(w);
  auto value = [&](double t) { return k + a * std::cos(t) + b * std::sin(t); };
  double best = std::min(value(arc.theta_begin), value(arc.theta_end));
  double critical = std::atan2(b, a) + kPi;  // minimizer of the sinusoid
  critical -= kTwoPi * std::floor((critical - arc.theta_begin) / kTwoPi);
  if (critical <= arc.theta_end) best = std::min(best, value(critical));
  return best;
}

}  // namespace

CapConstraint CapConstraint::make(const Vec3& pole, double rho) {
  const double norm = pole.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw GeometryError("cap pole must be nonzero");
  if (!(rho > 0.0 && rho <= kPi / 2)) {
    throw GeometryError("cap radius " + std::to_string(rho) + " outside (0, pi/2]");
  }
  return {pole / norm, rho};
}

Vec3 CapConstraint::frame_u() const {
  const Vec3 axis = std::abs(pole.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  return axis.cross(pole).normalized();
}

Vec3 CapConstraint::frame_v() const { return pole.cross(frame_u()); }

Vec3 CapConstraint::circle_point(double theta) const {
  return std::cos(rho) * pole +
         std::sin(rho) * (std::cos(theta) * frame_u() + std::sin(theta) * frame_v());
}

Vec3 CapConstraint::circle_tangent(double theta) const {
  return -std::sin(theta) * frame_u() + std::cos(theta) * frame_v();
}

CapBody CapBody::create(std::vector<CapConstraint> constraints) {
  if (constraints.empty()) throw GeometryError("a body needs at least one cap");
  for (auto& c : constraints) c = CapConstraint::make(c.pole, c.rho);
  const Incircle incircle = locate_incircle(constraints);
  if (incircle.radius <= kInteriorTol) throw GeometryError("cap intersection has empty interior");
  CapBody body;
  body.constraints_ = std::move(constraints);
  body.incenter_ = incircle.center;
  body.inradius_ = incircle.radius;
  return body;
}

CapBody ball_body(const Vec3& pole, double radius) {
  return CapBody::create({CapConstraint::make(pole, radius)});
}

CapBody octant_body() {
  return CapBody::create({CapConstraint::make(Vec3::UnitX(), kPi / 2),
                          CapConstraint::make(Vec3::UnitY(), kPi / 2),
                          CapConstraint::make(Vec3::UnitZ(), kPi / 2)});
}

bool contains(const CapBody& body, const Vec3& p, double tol) {
  for (const auto& c : body.constraints()) {
    if (angle_between(p, c.pole) > c.rho + tol) return false;
  }
  return true;
}

double distance_to_boundary(const CapBody& body, const Vec3& p) {
  if (!contains(body, p, 1e-12)) throw PreconditionError("point lies outside the body");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : body.constraints()) best = std::min(best, c.rho - angle_between(p, c.pole));
  return std::max(0.0, best);
}

double distance_to_body(const CapBody& body, const Vec3& p) {
  return distance_to_body(body, boundary_structure(body), p);
}

double distance_to_body(const CapBody& body, const BoundaryStructure& boundary, const Vec3& p) {
  if (contains(body, p)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& arc : boundary.arcs) {
    const CapConstraint& cap = body.constraints()[arc.constraint];
    // Nearest circle point lies on the meridian through p; otherwise the
    // nearest point of the arc is an endpoint.
    double theta = std::atan2(p.dot(cap.frame_v()), p.dot(cap.frame_u()));
    theta -= kTwoPi * std::floor((theta - arc.theta_begin) / kTwoPi);
    if (theta <= arc.theta_end) {
      best = std::min(best, std::abs(angle_between(p, cap.pole) - cap.rho));
    } else {
      best = std::min(best, angle_between(p, cap.circle_point(arc.theta_begin)));
      best = std::min(best, angle_between(p, cap.circle_point(arc.theta_end)));
    }
  }
  return best;
}

CapBody inner_parallel(const CapBody& body, double t) {
  if (t < 0.0) throw PreconditionError("inner parallel distance must be nonnegative");
  if (t >= body.inradius()) {
    throw GeometryError("inner parallel at t = " + std::to_string(t) +
                        " has empty interior (inradius " + std::to_string(body.inradius()) + ")");
  }
  CapBody out;
  out.constraints_ = body.constraints_;
  for (auto& c : out.constraints_) c.rho -= t;
  out.incenter_ = body.incenter_;
  out.inradius_ = body.inradius_ - t;
  return out;
}

double inradius(const CapBody& body) { return body.inradius(); }

BoundaryStructure boundary_structure(const CapBody& body) {
  const auto& caps = body.constraints();
  const int m = static_cast<int>(caps.size());
  BoundaryStructure out;
  std::vector<BoundaryArc> arcs;
  for (int i = 0; i < m; ++i) {
    std::vector<Interval> allowed{{0.0, kTwoPi}};
    for (int j = 0; j < m && !allowed.empty(); ++j) {
      if (j == i) continue;
      if (auto restriction = allowed_on_circle(caps, i, j)) allowed = intersect(allowed, *restriction);
    }
    if (allowed.empty()) continue;
    // Join the pieces that meet across theta = 0.
    if (allowed.size() > 1 && allowed.front().first == 0.0 && allowed.back().second == kTwoPi) {
      allowed.back().second = kTwoPi + allowed.front().second;
      allowed.erase(allowed.begin());
    }
    for (const auto& [lo, hi] : allowed) {
      const double length = std::sin(caps[i].rho) * (hi - lo);
      if (length < kMinArcLength) continue;
      arcs.push_back({i, lo, hi, length, std::cos(caps[i].rho) / std::sin(caps[i].rho)});
    }
  }
  if (arcs.empty()) throw GeometryError("body has no boundary arcs");
  if (arcs.size() == 1) {
    if (arcs.front().sweep() < kTwoPi - 1e-12) throw GeometryError("open boundary curve");
    out.arcs = std::move(arcs);
    return out;
  }

  // Chain the arcs: each end must meet exactly one start.
  std::vector<int> order{0};
  std::vector<bool> used(arcs.size(), false);
  used[0] = true;
  for (std::size_t step = 1; step <= arcs.size(); ++step) {
    const BoundaryArc& last = arcs[order.back()];
    const Vec3 end = caps[last.constraint].circle_point(last.theta_end);
    int next = -1;
    double best = kLinkTol;
    for (std::size_t k = 0; k < arcs.size(); ++k) {
      if (static_cast<int>(k) == order.back()) continue;
      const double gap =
          (caps[arcs[k].constraint].circle_point(arcs[k].theta_begin) - end).norm();
      if (gap < best) {
        best = gap;
        next = static_cast<int>(k);
      }
    }
    if (next < 0) throw GeometryError("boundary arcs do not close up");
    if (step == arcs.size()) {
      if (next != 0) throw GeometryError("boundary is not a single closed curve");
      break;
    }
    if (used[next]) throw GeometryError("boundary is not a single closed curve");
    used[next] = true;
    order.push_back(next);
  }
  for (int idx : order) out.arcs.push_back(arcs[idx]);

  const int count = static_cast<int>(out.arcs.size());
  for (int k = 0; k < count; ++k) {
    const BoundaryArc& in = out.arcs[k];
    const BoundaryArc& next = out.arcs[(k + 1) % count];
    const Vec3 point = caps[in.constraint].circle_point(in.theta_end);
    const Vec3 t_in = caps[in.constraint].circle_tangent(in.theta_end);
    const Vec3 t_out = caps[next.constraint].circle_tangent(next.theta_begin);
    const double angle = std::atan2(t_in.cross(t_out).dot(point), t_in.dot(t_out));
    if (!(angle > -1e-12 && angle < kPi)) throw GeometryError("non-convex corner in boundary");
    out.vertices.push_back({point, std::max(0.0, angle), k, (k + 1) % count});
  }
  return out;
}

double perimeter(const BoundaryStructure& boundary, const CapBody&) {
  double total = 0.0;
  for (const auto& arc : boundary.arcs) total += arc.length;
  return total;
}

double area(const BoundaryStructure& boundary, const CapBody& body) {
  double turning = 0.0;
  for (const auto& arc : boundary.arcs) {
    turning += std::cos(body.constraints()[arc.constraint].rho) * arc.sweep();
  }
  for (const auto& v : boundary.vertices) turning += v.exterior_angle;
  return kTwoPi - turning;
}

double perimeter(const CapBody& body) { return perimeter(boundary_structure(body), body); }

double area(const CapBody& body) { return area(boundary_structure(body), body); }

Vec3 arc_point(const CapBody& body, const BoundaryArc& arc, double theta) {
  return body.constraints()[arc.constraint].circle_point(theta);
}

std::vector<Vec3> sample_boundary(const CapBody& body, int count) {
  const BoundaryStructure boundary = boundary_structure(body);
  const double total = perimeter(boundary, body);
  std::vector<Vec3> points;
  points.reserve(count);
  std::size_t arc = 0;
  double consumed = 0.0;
  for (int i = 0; i < count; ++i) {
    const double s = total * i / count;
    while (arc + 1 < boundary.arcs.size() && s > consumed + boundary.arcs[arc].length) {
      consumed += boundary.arcs[arc].length;
      ++arc;
    }
    const BoundaryArc& a = boundary.arcs[arc];
    const double fraction = std::clamp((s - consumed) / a.length, 0.0, 1.0);
    points.push_back(arc_point(body, a, a.theta_begin + fraction * a.sweep()));
  }
  return points;
}

double hemisphere_margin(const CapBody& body, const BoundaryStructure& boundary, const Vec3& w) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& arc : boundary.arcs) {
    best = std::min(best, arc_min_of_linear(body.constraints()[arc.constraint], arc, w));
  }
  return best;
}

HemisphereWitness hemisphere_witness(const CapBody& body) {
  const BoundaryStructure boundary = boundary_structure(body);
  HemisphereWitness best{body.incenter(), -std::numeric_limits<double>::infinity()};
  auto consider = [&](const Vec3& w) {
    if (w.norm() == 0.0) return;
    const Vec3 unit = w.normalized();
    const double margin = hemisphere_margin(body, boundary, unit);
    if (margin > best.margin) best = {unit, margin};
  };
  Vec3 pole_sum = Vec3::Zero();
  for (const auto& c : body.constraints()) pole_sum += c.pole;
  consider(pole_sum);
  if (best.margin <= 1e-12) {
    consider(body.incenter());
    for (const auto& c : body.constraints()) consider(c.pole);
    // Fibonacci grid fallback.
    constexpr int kGrid = 4000;
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < kGrid; ++i) {
      const double z = 1.0 - 2.0 * (i + 0.5) / kGrid;
      const double r = std::sqrt(1.0 - z * z);
      consider(Vec3(r * std::cos(golden * i), r * std::sin(golden * i), z));
    }
  }
  if (!(best.margin > 1e-12)) {
    throw GeometryError("no open hemisphere contains the body; strong convexity not certified");
  }
  return best;
}

CapBody random_body(std::uint64_t seed, int k, double spread) {
  if (k < 3 || k > 12) throw PreconditionError("random_body needs 3 <= k <= 12 caps");
  if (!(spread >= 0.0 && spread < kPi / 2)) throw PreconditionError("spread must lie in [0, pi/2)");
  Rng rng(seed);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<CapConstraint> caps;
    for (int i = 0; i < k; ++i) {
      const Vec3 pole = rng.point_in_cap(Vec3::UnitZ(), spread);
      const double rho = rng.uniform(0.6, kPi / 2);
      caps.push_back(CapConstraint::make(pole, rho));
    }
    try {
      CapBody body = CapBody::create(std::move(caps));
      const BoundaryStructure boundary = boundary_structure(body);
      if (boundary.arcs.size() < 2) continue;
      hemisphere_witness(body);
      return body;
    } catch (const GeometryError&) {
      continue;
    }
  }
  throw GeometryError("random_body could not generate a valid body");
}

std::vector<Vec3> sample_interior(const CapBody& body, int count, std::uint64_t seed) {
  const HemisphereWitness w = hemisphere_witness(body);
  // The body lies in the cap of radius acos(margin) about the witness.
  const double alpha = std::acos(std::clamp(w.margin, -1.0, 1.0)) + 1e-9;
  Rng rng(seed);
  std::vector<Vec3> points;
  points.reserve(count);
  while (static_cast<int>(points.size()) < count) {
    const Vec3 p = rng.point_in_cap(w.direction, alpha);
    if (contains(body, p)) points.push_back(p);
  }
  return points;
}

int midpoint_convexity_violations(const CapBody& body, int pairs, std::uint64_t seed) {
  const std::vector<Vec3> points = sample_interior(body, 2 * pairs, seed);
  int violations = 0;
  for (int i = 0; i < pairs; ++i) {
    const Vec3 mid = (points[2 * i] + points[2 * i + 1]).normalized();
    if (!contains(body, mid, 1e-12)) ++violations;
  }
  return violations;
}

CapBody read_body(std::istream& in) {
  std::vector<CapConstraint> caps;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    double x, y, z, rho;
    if (!(fields >> x)) continue;
    if (!(fields >> y >> z >> rho)) {
      throw PreconditionError("body record line " + std::to_string(line_no) +
                              ": expected `pole_x pole_y pole_z rho`");
    }
    std::string extra;
    if (fields >> extra) {
      throw PreconditionError("body record line " + std::to_string(line_no) + ": trailing data");
    }
    caps.push_back(CapConstraint::make(Vec3(x, y, z), rho));
  }
  return CapBody::create(std::move(caps));
}

CapBody read_body_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open body file " + path);
  return read_body(in);
}

void write_body(std::ostream& out, const CapBody& body) {
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::setprecision(17);
  for (const auto& c : body.constraints()) {
    out << c.pole.x() << ' ' << c.pole.y() << ' ' << c.pole.z() << ' ' << c.rho << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

}  // namespace sphrobin
