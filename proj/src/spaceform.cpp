#include "sphrobin/spaceform.hpp"

#include <array>
#include <cmath>
#include <string>

#include "sphrobin/error.hpp"

namespace sphrobin {

namespace {

constexpr int kGaussOrder = 8;

struct GaussRule {
  std::array<double, kGaussOrder> nodes{};
  std::array<double, kGaussOrder> weights{};
};

// Newton iteration on P_m from the Chebyshev initial guesses.
GaussRule make_gauss_rule() {
  GaussRule rule;
  constexpr int m = kGaussOrder;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= m; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = m * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

const GaussRule& gauss_rule() {
  static const GaussRule rule = make_gauss_rule();
  return rule;
}

double composite_gauss(const std::function<double(double)>& f, double a, double b,
                       int panels) {
  const GaussRule& rule = gauss_rule();
  const double width = (b - a) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * width;
    double panel = 0.0;
    for (int i = 0; i < kGaussOrder; ++i) {
      panel += rule.weights[i] * f(mid + 0.5 * width * rule.nodes[i]);
    }
    sum += 0.5 * width * panel;
  }
  return sum;
}

}  // namespace

void SpaceFormParams::validate() const {
  if (kappa < -1 || kappa > 1) {
    throw PreconditionError("space form curvature must be -1, 0 or 1");
  }
  if (dim < 2) throw PreconditionError("space form dimension must be at least 2");
}

double sn(int kappa, double t) {
  switch (kappa) {
    case -1: return std::sinh(t);
    case 0: return t;
    case 1: return std::sin(t);
    default: throw PreconditionError("space form curvature must be -1, 0 or 1");
  }
}

double cn(int kappa, double t) {
  switch (kappa) {
    case -1: return std::cosh(t);
    case 0: return 1.0;
    case 1: return std::cos(t);
    default: throw PreconditionError("space form curvature must be -1, 0 or 1");
  }
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  int panels = 1;
  double previous = composite_gauss(f, a, b, panels);
  for (int level = 0; level < 20; ++level) {
    panels *= 2;
    const double current = composite_gauss(f, a, b, panels);
    if (std::abs(current - previous) < tol * std::max(1.0, std::abs(current))) {
      return current;
    }
    previous = current;
  }
  return previous;
}

double steiner_L(int j, const SpaceFormParams& params, double t) {
  params.validate();
  const int n = params.dim;
  if (j < 0 || j > n) {
    throw PreconditionError("steiner_L index " + std::to_string(j) + " outside [0, n]");
  }
  if (t < 0.0) throw PreconditionError("steiner_L requires t >= 0");
  if (j == 0) return 1.0;
  if (params.kappa == 1 && n == 2) {
    return j == 1 ? std::sin(t) : 1.0 - std::cos(t);
  }
  const int kappa = params.kappa;
  return integrate(
      [=](double s) { return std::pow(cn(kappa, s), n - j) * std::pow(sn(kappa, s), j - 1); },
      0.0, t);
}

double sigma(int n) {
  if (n < 2) throw PreconditionError("sigma(n) requires n >= 2");
  return 2.0 * std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n);
}

double ball_perimeter(int n, double radius) {
  return sigma(n) * std::pow(std::sin(radius), n - 1);
}

double ball_volume(int n, double radius) {
  if (n == 2) return 2.0 * kPi * (1.0 - std::cos(radius));
  return sigma(n) * integrate([n](double r) { return std::pow(std::sin(r), n - 1); }, 0.0,
                              radius);
}

BallGeometry ball_geometry(int n, double radius) {
  if (n < 2) throw PreconditionError("ball dimension must be at least 2");
  if (!(radius > 0.0 && radius <= kPi / 2)) {
    throw GeometryError("ball radius " + std::to_string(radius) +
                        " outside (0, pi/2]: not strongly convex");
  }
  return {n, radius, ball_perimeter(n, radius), ball_volume(n, radius)};
}

double radius_from_perimeter(int n, double perimeter) {
  const double full = sigma(n);
  if (!(perimeter > 0.0)) throw PreconditionError("perimeter must be positive");
  if (perimeter > full * (1.0 + 1e-14)) {
    throw GeometryError("perimeter " + std::to_string(perimeter) +
                        " exceeds sigma_n: no strongly convex ball has it");
  }
  // Converges to the upper end of {R : P(R) <= perimeter}; near pi/2 the
  // perimeter is flat in R and this keeps P = sigma_n mapped to pi/2.
  double lo = 0.0;
  double hi = kPi / 2;
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    if (ball_perimeter(n, mid) <= perimeter) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace sphrobin
