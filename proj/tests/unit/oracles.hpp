#pragma once

// Reference computations written from the defining formulas, sharing no
// code with the library.

#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

struct Sampled {
  std::vector<double> x;
  std::vector<double> p;
};

inline double trapezoid(const std::vector<double>& f, double h) {
  double s = 0.5 * (f.front() + f.back());
  for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
  return s * h;
}

inline std::vector<double> uniform(double lo, double hi, std::size_t n) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return x;
}

/// Stationary density exp(-Phi) / (sigma A) for additive noise, Phi the
/// trapezoid running integral of V'/(sigma^2 A), normalized by trapezoid.
inline Sampled additive_density(const std::function<double(double)>& dV, double sigma,
                                const std::function<double(double)>& A, double lo, double hi,
                                std::size_t n) {
  Sampled out{uniform(lo, hi, n), std::vector<double>(n)};
  const double h = (hi - lo) / static_cast<double>(n - 1);
  std::vector<double> g(n), phi(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) g[i] = dV(out.x[i]) / (sigma * sigma * A(out.x[i]));
  for (std::size_t i = 1; i < n; ++i) phi[i] = phi[i - 1] + 0.5 * h * (g[i - 1] + g[i]);
  double lowest = phi[0];
  for (double v : phi) lowest = std::min(lowest, v);
  for (std::size_t i = 0; i < n; ++i) out.p[i] = std::exp(-(phi[i] - lowest)) / (sigma * A(out.x[i]));
  const double z = trapezoid(out.p, h);
  for (double& v : out.p) v /= z;
  return out;
}

/// Second-order diffusion factor in its expanded polynomial form.
inline double A2(double s, double R, double zeta) {
  const double d = 1.0 - s * R;
  return (3 * s * s * R * R - 3 * s * (s * zeta + 1) * R + s * s * zeta * zeta + s * zeta + 1) / (2 * d * d * d);
}

inline double A0(double s, double R) { return 0.5 / (1.0 - s * R); }

/// Response moment R of the bistable quartic under additive noise, found
/// by bisection on I(R) - R over a fine trapezoid grid.
inline double bistable_R(double sigma, double s, int M, double lo = -5.0, double hi = 5.0, std::size_t n = 100001) {
  auto zeta = [](double x) { return 1.0 - 3.0 * x * x; };
  auto dV = [](double x) { return x * x * x - x; };
  auto residual = [&](double R) {
    auto A = [&](double x) { return M == 0 ? A0(s, R) : A2(s, R, zeta(x)); };
    const Sampled d = additive_density(dV, sigma, A, lo, hi, n);
    const double h = d.x[1] - d.x[0];
    std::vector<double> zf(n);
    for (std::size_t i = 0; i < n; ++i) zf[i] = zeta(d.x[i]) * d.p[i];
    return trapezoid(zf, h) - R;
  };
  double a = -20.0, b = 0.0;
  for (int it = 0; it < 80; ++it) {
    const double m = 0.5 * (a + b);
    (residual(m) > 0.0 ? a : b) = m;
  }
  return 0.5 * (a + b);
}

}  // namespace oracle
