#include "noisectl/model.hpp"

#include <cmath>
#include <sstream>

#include "noisectl/error.hpp"

namespace noisectl {

NoiseIntensity NoiseIntensity::additive(double sigma) {
  return NoiseIntensity(Kind::Additive, sigma, Polynomial{1.0});
}

NoiseIntensity NoiseIntensity::linear_multiplicative(double sigma) {
  return NoiseIntensity(Kind::LinearMultiplicative, sigma, Polynomial{0.0, 1.0});
}

NoiseIntensity NoiseIntensity::polynomial(Polynomial shape) {
  return NoiseIntensity(Kind::Polynomial, 1.0, std::move(shape));
}

NoiseIntensity NoiseIntensity::scaled(double factor) const {
  return NoiseIntensity(kind_, sigma_ * factor, shape_);
}

NoiseIntensity NoiseIntensity::with_sigma(double sigma) const {
  return NoiseIntensity(kind_, sigma, shape_);
}

bool NoiseIntensity::nonvanishing_on(const Interval& domain) const {
  if (sigma_ == 0.0 || !std::isfinite(sigma_)) return false;
  switch (kind_) {
    case Kind::Additive:
      return true;
    case Kind::LinearMultiplicative:
      return !domain.contains(0.0);
    case Kind::Polynomial: {
      // Dense sign scan; a root of even multiplicity strictly between samples
      // is not detected.
      constexpr int kSamples = 10001;
      const double h = domain.width() / (kSamples - 1);
      double prev = shape_(domain.lo);
      if (prev == 0.0) return false;
      for (int i = 1; i < kSamples; ++i) {
        const double v = shape_(domain.lo + i * h);
        if (v == 0.0 || (v > 0.0) != (prev > 0.0)) return false;
        prev = v;
      }
      return true;
    }
  }
  return false;
}

std::string to_string(NoiseIntensity::Kind kind) {
  switch (kind) {
    case NoiseIntensity::Kind::Additive:
      return "additive";
    case NoiseIntensity::Kind::LinearMultiplicative:
      return "multiplicative";
    case NoiseIntensity::Kind::Polynomial:
      return "polynomial";
  }
  return "unknown";
}

NoiseIntensity::Kind parse_noise_kind(const std::string& text) {
  if (text == "additive") return NoiseIntensity::Kind::Additive;
  if (text == "multiplicative" || text == "linear_multiplicative")
    return NoiseIntensity::Kind::LinearMultiplicative;
  if (text == "polynomial") return NoiseIntensity::Kind::Polynomial;
  throw ValidationError("unknown noise.kind '" + text +
                        "' (expected additive | multiplicative | polynomial)");
}

void ScalarModel::validate(bool require_nonvanishing) const {
  if (!(s_cor > 0.0) || !std::isfinite(s_cor))
    throw ValidationError("noise.s_cor must be positive and finite");
  if (!(domain.lo < domain.hi) || !std::isfinite(domain.lo) || !std::isfinite(domain.hi))
    throw ValidationError("domain must be a finite interval with lo < hi");
  if (!std::isfinite(intensity.sigma()))
    throw ValidationError("noise.sigma must be finite");
  if (require_nonvanishing && !intensity.nonvanishing_on(domain))
    throw DomainError("noise intensity vanishes on the computation domain");
}

ScalarModel ScalarModel::with_noise(double sigma, double scor) const {
  ScalarModel m = *this;
  m.intensity = intensity.with_sigma(sigma);
  m.s_cor = scor;
  return m;
}

void ControlParams::validate() const {
  if (!(a >= 0.0) || !std::isfinite(a)) throw ValidationError("control gain a must be >= 0");
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw ValidationError("control delay tau must be >= 0");
  if (!std::isfinite(xhat)) throw ValidationError("control shift xhat must be finite");
  if (a * tau >= 1.0) {
    std::ostringstream os;
    os << "control violates a*tau < 1: a*tau = " << a * tau << " (a = " << a << ", tau = " << tau
       << ")";
    throw ValidationError(os.str());
  }
}

EffectiveSystem make_effective(const ScalarModel& model, const ControlParams& ctrl) {
  ctrl.validate();
  const double scale = 1.0 - ctrl.a * ctrl.tau;
  // (a/2)(x - xhat)^2 = (a/2) xhat^2 - a xhat x + (a/2) x^2
  const Polynomial well{0.5 * ctrl.a * ctrl.xhat * ctrl.xhat, -ctrl.a * ctrl.xhat, 0.5 * ctrl.a};
  EffectiveSystem sys;
  sys.eff_potential = ctrl.a == 0.0 ? model.potential : model.potential + well;
  sys.eff_intensity = scale == 1.0 ? model.intensity : model.intensity.scaled(1.0 / std::sqrt(scale));
  sys.eff_scor = model.s_cor / scale;
  sys.time_scale = scale;
  sys.domain = model.domain;
  return sys;
}

EffectiveSystem as_effective(const ScalarModel& model) { return make_effective(model, {}); }

namespace {

void check_point(const EffectiveSystem& sys, double x, double s) {
  if (!sys.domain.contains(x)) {
    std::ostringstream os;
    os << "x = " << x << " outside domain [" << sys.domain.lo << ", " << sys.domain.hi << "]";
    throw DomainError(os.str());
  }
  if (s == 0.0) {
    std::ostringstream os;
    os << "noise intensity vanishes at x = " << x;
    throw DomainError(os.str());
  }
}

}  // namespace

double zeta(const EffectiveSystem& sys, double x) {
  const double s = sys.eff_intensity(x);
  check_point(sys, x, s);
  const double v1 = sys.eff_potential.derivative_at(x, 1);
  const double v2 = sys.eff_potential.derivative_at(x, 2);
  if (sys.eff_intensity.kind() == NoiseIntensity::Kind::Additive) return -v2;
  return -v2 + v1 * sys.eff_intensity.derivative_at(x, 1) / s;
}

double zeta(const ScalarModel& model, double x) { return zeta(as_effective(model), x); }

double zeta_prime(const EffectiveSystem& sys, double x) {
  const double s = sys.eff_intensity(x);
  check_point(sys, x, s);
  const double v1 = sys.eff_potential.derivative_at(x, 1);
  const double v2 = sys.eff_potential.derivative_at(x, 2);
  const double v3 = sys.eff_potential.derivative_at(x, 3);
  if (sys.eff_intensity.kind() == NoiseIntensity::Kind::Additive) return -v3;
  const double s1 = sys.eff_intensity.derivative_at(x, 1);
  const double s2 = sys.eff_intensity.derivative_at(x, 2);
  return -v3 + (v2 * s1 + v1 * s2) / s - v1 * s1 * s1 / (s * s);
}

double lyapunov_time(const ScalarModel& model, double x_eq) {
  const double curvature = model.potential.derivative_at(x_eq, 2);
  if (!(curvature > 0.0)) {
    std::ostringstream os;
    os << "x = " << x_eq << " is not a stable equilibrium (V'' = " << curvature << ")";
    throw ValidationError(os.str());
  }
  return 1.0 / curvature;
}

std::vector<std::string> timescale_warnings(const ScalarModel& model, const ControlParams& ctrl,
                                            double x_eq) {
  std::vector<std::string> out;
  const double eta = lyapunov_time(model, x_eq);
  if (ctrl.tau >= eta) {
    std::ostringstream os;
    os << "delay tau = " << ctrl.tau << " is not below the Lyapunov time " << eta;
    out.push_back(os.str());
  }
  if (model.s_cor > eta) {
    std::ostringstream os;
    os << "correlation time s_cor = " << model.s_cor << " exceeds the Lyapunov time " << eta;
    out.push_back(os.str());
  }
  return out;
}

namespace presets {

ScalarModel bistable(double sigma, double s_cor) {
  return ScalarModel{Polynomial{0.0, 0.0, -0.5, 0.0, 0.25}, NoiseIntensity::additive(sigma), s_cor,
                     Interval{-5.0, 5.0}};
}

ScalarModel laser(double sigma, double s_cor) {
  return ScalarModel{
      Polynomial{0.0, -kLaserY, kLaserC1 / 2.0, -kLaserC2 / 3.0, kLaserC3 / 4.0},
      NoiseIntensity::linear_multiplicative(sigma), s_cor, Interval{0.5, 90.0}};
}

}  // namespace presets

}  // namespace noisectl
