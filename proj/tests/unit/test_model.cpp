#include <doctest.h>

#include <cmath>
#include <string>

#include "noisectl/error.hpp"
#include "noisectl/model.hpp"

using namespace noisectl;

namespace {

double round_to(double v, int decimals) {
  const double f = std::pow(10.0, decimals);
  return std::round(v * f) / f;
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("effective parameters of the controlled bistable panels") {
  const ScalarModel m = presets::bistable(1.2, 0.25);
  struct Row { double tau, sigma_eff, scor_eff; };
  for (const Row r : {Row{0.1, 1.26, 0.28}, Row{0.2, 1.34, 0.31}, Row{0.4, 1.55, 0.42}}) {
    const EffectiveSystem e = make_effective(m, {1.0, r.tau, 1.0});
    CHECK(round_to(e.eff_intensity.sigma(), 2) == doctest::Approx(r.sigma_eff));
    CHECK(round_to(e.eff_scor, 2) == doctest::Approx(r.scor_eff));
  }
}

TEST_CASE("effective parameters of the controlled laser panels") {
  const ScalarModel m = presets::laser(2.0, 0.02);
  struct Row { double tau, sigma_eff, scor_eff; };
  for (const Row r : {Row{0.02, 2.09, 0.022}, Row{0.05, 2.24, 0.025}, Row{0.08, 2.43, 0.029}}) {
    const EffectiveSystem e = make_effective(m, {4.0, r.tau, 42.0});
    CHECK(round_to(e.eff_intensity.sigma(), 2) == doctest::Approx(r.sigma_eff));
    CHECK(round_to(e.eff_scor, 3) == doctest::Approx(r.scor_eff));
    CHECK(e.eff_intensity.kind() == NoiseIntensity::Kind::LinearMultiplicative);
  }
}

TEST_CASE("effective potential adds the quadratic control term") {
  const ScalarModel m = presets::bistable();
  const ControlParams c{1.5, 0.2, 0.7};
  const EffectiveSystem e = make_effective(m, c);
  for (double x : {-3.0, -1.0, 0.0, 0.4, 2.5})
    CHECK(e.eff_potential(x) == doctest::Approx(m.potential(x) + 0.75 * (x - 0.7) * (x - 0.7)).epsilon(1e-13));
  CHECK(e.time_scale == doctest::Approx(1.0 - 0.3));
  CHECK(make_effective(m, {0.0, 0.0, 0.0}).eff_potential == m.potential);
}

TEST_CASE("zeta for additive noise is minus the curvature") {
  const EffectiveSystem e = as_effective(presets::bistable());
  for (double x : {-2.0, 0.0, 0.5, 1.0})
    CHECK(zeta(e, x) == doctest::Approx(1.0 - 3.0 * x * x));
}

TEST_CASE("laser zeta matches a finite-difference oracle") {
  const ScalarModel m = presets::laser();
  auto dV = [](double x) {
    return presets::kLaserC3 * x * x * x - presets::kLaserC2 * x * x + presets::kLaserC1 * x - presets::kLaserY;
  };
  auto ratio = [&](double x) { return dV(x) / (2.0 * x); };
  const double h = 1e-6;
  for (double x : {1.0, 7.69, 20.0, 42.0, 80.0}) {
    const double fd = -(2.0 * x) * (ratio(x + h) - ratio(x - h)) / (2.0 * h);
    CHECK(zeta(m, x) == doctest::Approx(fd).epsilon(1e-6));
    const double closed = -(presets::kLaserC1 - 2 * presets::kLaserC2 * x + 3 * presets::kLaserC3 * x * x) + dV(x) / x;
    CHECK(zeta(m, x) == doctest::Approx(closed).epsilon(1e-12));
  }
}

TEST_CASE("zeta_prime matches a finite difference of zeta") {
  const EffectiveSystem e = make_effective(presets::laser(), {4.0, 0.05, 42.0});
  const double h = 1e-5;
  for (double x : {2.0, 10.0, 42.0}) {
    const double fd = (zeta(e, x + h) - zeta(e, x - h)) / (2 * h);
    CHECK(zeta_prime(e, x) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("laser equilibria and relaxation time") {
  const ScalarModel m = presets::laser();
  CHECK(std::abs(m.potential.derivative_at(42.0)) < 0.5);
  CHECK(std::abs(m.potential.derivative_at(7.69)) < 0.5);
  // V''(42) = c1 - 2 c2 42 + 3 c3 42^2 = 35.262
  CHECK(m.potential.derivative_at(42.0, 2) == doctest::Approx(35.262).epsilon(1e-12));
  CHECK(lyapunov_time(m, 42.0) == doctest::Approx(1.0 / 35.262));
}

TEST_CASE("timescale warnings fire when the delay reaches the relaxation time") {
  const ScalarModel m = presets::laser(2.0, 0.02);
  CHECK(timescale_warnings(m, {4.0, 0.01, 42.0}, 42.0).empty());
  CHECK_FALSE(timescale_warnings(m, {4.0, 0.05, 42.0}, 42.0).empty());
}

TEST_CASE("control validation names the product a*tau") {
  try {
    ControlParams{2.0, 0.5, 1.0}.validate();
    FAIL("expected a ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("a*tau") != std::string::npos);
  }
  CHECK_THROWS_AS(ControlParams({-1.0, 0.1, 0.0}).validate(), ValidationError);
  CHECK_NOTHROW(ControlParams({2.0, 0.49, 1.0}).validate());
}

TEST_CASE("model validation") {
  ScalarModel m = presets::bistable();
  CHECK_NOTHROW(m.validate());
  CHECK_THROWS_AS(m.with_noise(1.0, 0.0).validate(), ValidationError);
  m.domain = {1.0, -1.0};
  CHECK_THROWS_AS(m.validate(), ValidationError);

  ScalarModel laser = presets::laser();
  laser.domain = {-1.0, 10.0};
  CHECK_THROWS_AS(laser.validate(), DomainError);
  CHECK_NOTHROW(laser.validate(false));
  CHECK_THROWS_AS(presets::bistable().with_noise(0.0, 0.1).validate(), DomainError);
}

TEST_CASE("noise kind names round-trip") {
  for (auto k : {NoiseIntensity::Kind::Additive, NoiseIntensity::Kind::LinearMultiplicative,
                 NoiseIntensity::Kind::Polynomial})
    CHECK(parse_noise_kind(to_string(k)) == k);
  CHECK_THROWS_AS(parse_noise_kind("pink"), ValidationError);
}

}
