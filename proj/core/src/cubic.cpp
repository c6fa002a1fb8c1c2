#include "noisectl/cubic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace noisectl {

namespace {

std::vector<double> quadratic_roots(double a, double b, double c) {
  if (a == 0.0) {
    if (b == 0.0) return {};
    return {-c / b};
  }
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return {};
  if (disc == 0.0) return {-b / (2.0 * a)};
  // Avoids cancellation in the smaller root.
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  std::vector<double> r{q / a, c / q};
  std::ranges::sort(r);
  return r;
}

}  // namespace

std::vector<double> real_cubic_roots(double c3, double c2, double c1, double c0) {
  if (c3 == 0.0) return quadratic_roots(c2, c1, c0);

  // Normalize to x^3 + a x^2 + b x + c, then depress with x = t - a/3.
  const double a = c2 / c3, b = c1 / c3, c = c0 / c3;
  const double p = b - a * a / 3.0;
  const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
  const double shift = -a / 3.0;
  const double disc = q * q / 4.0 + p * p * p / 27.0;

  std::vector<double> roots;
  const double scale = std::max({1.0, std::abs(p), std::abs(q)});
  if (std::abs(disc) <= 1e-14 * scale * scale) {
    if (std::abs(p) <= 1e-14 * scale) {
      roots = {shift};
    } else {
      // Double root at -3q/(2p), simple root at 3q/p.
      roots = {3.0 * q / p + shift, -1.5 * q / p + shift};
    }
  } else if (disc < 0.0) {
    const double m = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
    const double theta = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k)
      roots.push_back(m * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0) + shift);
  } else {
    const double s = std::sqrt(disc);
    const double u = std::cbrt(-q / 2.0 + s);
    const double v = std::cbrt(-q / 2.0 - s);
    roots = {u + v + shift};
  }

  for (double& x : roots) {
    const double f = ((c3 * x + c2) * x + c1) * x + c0;
    const double df = (3.0 * c3 * x + 2.0 * c2) * x + c1;
    if (df != 0.0) {
      const double polished = x - f / df;
      if (std::isfinite(polished)) x = polished;
    }
  }
  std::ranges::sort(roots);
  return roots;
}

}  // namespace noisectl
