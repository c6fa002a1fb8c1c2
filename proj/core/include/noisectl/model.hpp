#pragma once

#include <string>
#include <vector>

#include "noisectl/polynomial.hpp"

namespace noisectl {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const noexcept { return hi - lo; }
  bool contains(double x) const noexcept { return x >= lo && x <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// State-dependent noise intensity sigma(x) = sigma * shape(x).
///
/// The additive and linear-multiplicative kinds are kept distinct from a
/// general polynomial shape so that formulas specific to them can assert
/// their applicability.
class NoiseIntensity {
 public:
  enum class Kind { Additive, LinearMultiplicative, Polynomial };

  static NoiseIntensity additive(double sigma);
  static NoiseIntensity linear_multiplicative(double sigma);
  static NoiseIntensity polynomial(Polynomial shape);

  Kind kind() const noexcept { return kind_; }
  /// Overall scale. For the polynomial kind this multiplies the shape.
  double sigma() const noexcept { return sigma_; }
  const Polynomial& shape() const noexcept { return shape_; }

  double operator()(double x) const noexcept { return sigma_ * shape_(x); }
  double derivative_at(double x, int order = 1) const noexcept {
    return sigma_ * shape_.derivative_at(x, order);
  }

  NoiseIntensity scaled(double factor) const;
  NoiseIntensity with_sigma(double sigma) const;

  /// True when sigma(x) has no zero on the closed interval.
  bool nonvanishing_on(const Interval& domain) const;

  friend bool operator==(const NoiseIntensity&, const NoiseIntensity&) = default;

 private:
  NoiseIntensity(Kind kind, double sigma, Polynomial shape)
      : kind_(kind), sigma_(sigma), shape_(std::move(shape)) {}

  Kind kind_ = Kind::Additive;
  double sigma_ = 1.0;
  Polynomial shape_;
};

std::string to_string(NoiseIntensity::Kind kind);
NoiseIntensity::Kind parse_noise_kind(const std::string& text);

/// Scalar SDE dX/dt = -V'(X) + sigma(X) xi(t) with xi an Ornstein-Uhlenbeck
/// process of correlation time s_cor, restricted to a finite domain.
struct ScalarModel {
  Polynomial potential;
  NoiseIntensity intensity = NoiseIntensity::additive(1.0);
  double s_cor = 0.0;
  Interval domain;

  /// Throws ValidationError. The non-vanishing check on sigma can be waived
  /// for Monte Carlo runs of the noiseless gradient flow.
  void validate(bool require_nonvanishing = true) const;

  ScalarModel with_noise(double sigma, double s_cor) const;

  friend bool operator==(const ScalarModel&, const ScalarModel&) = default;
};

/// Delayed feedback -a (X(t - tau) - xhat).
struct ControlParams {
  double a = 0.0;
  double tau = 0.0;
  double xhat = 0.0;

  void validate() const;
  friend bool operator==(const ControlParams&, const ControlParams&) = default;
};

/// The rescaled non-delayed system that approximates the controlled SDDE for
/// small delay: Veff = V + (a/2)(x - xhat)^2, sigma_eff = sigma/sqrt(1 - a tau),
/// s_cor_eff = s_cor/(1 - a tau), time running as s = t/(1 - a tau).
struct EffectiveSystem {
  Polynomial eff_potential;
  NoiseIntensity eff_intensity = NoiseIntensity::additive(1.0);
  double eff_scor = 0.0;
  double time_scale = 1.0;
  Interval domain;

  friend bool operator==(const EffectiveSystem&, const EffectiveSystem&) = default;
};

EffectiveSystem make_effective(const ScalarModel& model, const ControlParams& ctrl);

/// The uncontrolled model viewed as an effective system (identity transform).
EffectiveSystem as_effective(const ScalarModel& model);

/// zeta(x) = -sigma(x) d/dx [V'(x)/sigma(x)], from exact polynomial derivatives.
double zeta(const EffectiveSystem& sys, double x);
double zeta(const ScalarModel& model, double x);
/// d zeta / dx.
double zeta_prime(const EffectiveSystem& sys, double x);

/// 1/V''(x_eq) at a stable equilibrium.
double lyapunov_time(const ScalarModel& model, double x_eq);

/// Non-fatal notes when the delay or the noise correlation time reach the
/// relaxation time at the desirable equilibrium.
std::vector<std::string> timescale_warnings(const ScalarModel& model, const ControlParams& ctrl,
                                            double x_eq);

namespace presets {

/// V = x^4/4 - x^2/2 with additive noise on [-5, 5]; wells at +-1.
ScalarModel bistable(double sigma = 1.2, double s_cor = 0.25);

/// Optical bistability model V = c3 x^4/4 - c2 x^3/3 + c1 x^2/2 - Y x with
/// noise sigma*x on [0.5, 90]; minima near 7.69 and 42.
ScalarModel laser(double sigma = 2.0, double s_cor = 0.02);

inline constexpr double kLaserY = 292.0;
inline constexpr double kLaserC1 = 59.79;
inline constexpr double kLaserC2 = 3.19;
inline constexpr double kLaserC3 = 0.046;

}  // namespace presets

}  // namespace noisectl
