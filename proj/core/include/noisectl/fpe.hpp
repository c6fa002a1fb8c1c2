#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "noisectl/model.hpp"
#include "noisectl/quadrature.hpp"

namespace noisectl {

/// Truncation order of the fluctuation expansion in the diffusion
/// coefficient. Zero is Hanggi's closure; Two adds the second-order terms.
enum class ClosureOrder { Zero = 0, Two = 2 };

ClosureOrder closure_from_int(int m);
inline int to_int(ClosureOrder m) { return static_cast<int>(m); }

/// A closure order, or nullopt for the classical white-noise coefficient 1/2.
using Closure = std::optional<ClosureOrder>;
std::string to_string(const Closure& closure);

struct FixedPointConfig {
  double tol = 1e-4;
  int max_iter = 100;
  /// R <- (1 - w) R + w I(R). The plain scheme is w = 1.
  double relaxation = 1.0;
  /// Switch to w = 0.5 after three sign-alternating residuals.
  bool auto_damp = true;

  void validate() const;
};

struct StationaryPDF {
  explicit StationaryPDF(QuadratureGrid g) : grid(std::move(g)) {}

  QuadratureGrid grid;
  std::vector<double> density;  // normalized over the grid
  double R = 0.0;               // converged response moment E[zeta(X)]
  Closure closure;
  double eff_scor = 0.0;
  /// C(R) for the antiderivative anchored at its minimum over the grid.
  double norm_constant = 1.0;
  int iterations_used = 0;
  double relaxation_used = 1.0;
  bool damping_engaged = false;
  bool seed_clamped = false;
  /// density at an endpoint exceeds 1e-10 of the peak.
  bool truncation_warning = false;
  std::vector<std::string> warnings;

  double spacing() const noexcept { return grid.spacing(); }
  /// Grid node of the largest density value.
  double argmax() const;
  /// Simpson integral of g(x) p(x).
  double expectation(const std::function<double(double)>& g) const;
};

inline constexpr double kTruncationRatio = 1e-10;

/// Stationary diffusion factor
///   A_M(x, R) = 1/2 sum_{m=0}^{M} [s (zeta - R)]^m / (1 - s R)^{m+1}
/// written in terms of zeta = zeta(x). Throws StationarityError if R >= 1/s.
double stationary_AM_from_zeta(double s_cor, ClosureOrder M, double R, double zeta_value);
/// d A_M / d zeta at fixed R.
double stationary_AM_dzeta(double s_cor, ClosureOrder M, double R, double zeta_value);

double stationary_AM(const EffectiveSystem& sys, ClosureOrder M, double R, double x);
/// Diffusion factor for any closure; 1/2 for the white-noise closure.
double diffusion_factor(const EffectiveSystem& sys, const Closure& closure, double R, double x);
/// d/dx of diffusion_factor.
double diffusion_factor_dx(const EffectiveSystem& sys, const Closure& closure, double R, double x);

/// f(x) = exp(-Phi(x)) / (|sigma(x)| A(x, R)), Phi the running integral of
/// V'/(sigma^2 A) re-centered at its minimum so exp never overflows.
std::vector<double> unnormalized_density(const EffectiveSystem& sys, const Closure& closure,
                                         double R, const QuadratureGrid& grid);

/// I(R) = int zeta f / int f.
double self_consistency_I(const EffectiveSystem& sys, const Closure& closure, double R,
                          const QuadratureGrid& grid);

/// Fixed-point iteration for R seeded from the white-noise moment, followed
/// by the density at the converged R.
StationaryPDF solve_stationary(const EffectiveSystem& sys, ClosureOrder M,
                               const FixedPointConfig& cfg, const QuadratureGrid& grid);

/// As solve_stationary, but the effective system itself depends on R (used
/// by peak-drift cancellation). `seed` provides the white-noise starting moment.
StationaryPDF solve_stationary_coupled(const std::function<EffectiveSystem(double)>& system_for,
                                       const EffectiveSystem& seed, ClosureOrder M,
                                       const FixedPointConfig& cfg, const QuadratureGrid& grid);

/// Classical Stratonovich stationary solution (A = 1/2). Its R is the zeta
/// moment; iterations_used is 0.
StationaryPDF solve_white_noise(const EffectiveSystem& sys, const QuadratureGrid& grid);

/// Two-column CSV "x,p0" preceded by a comment line carrying R, M,
/// iterations_used and norm_constant. Values use 17 significant digits.
void write_csv(const StationaryPDF& pdf, std::ostream& out);
void write_csv(const StationaryPDF& pdf, const std::filesystem::path& path);

struct DensityTable {
  std::vector<double> x;
  std::vector<double> p;
};
/// Reads any two-column "x,p" CSV with optional '#' comments and a header.
DensityTable read_density_csv(const std::filesystem::path& path);

}  // namespace noisectl
