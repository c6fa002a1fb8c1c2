#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "noisectl/error.hpp"
#include "noisectl/mc.hpp"

using namespace noisectl;

namespace {

double factorial(int k) { return std::tgamma(k + 1.0); }

/// Method-of-steps solution of y' = -a y(t - tau) with y = y0 on [-tau, 0].
double delayed_linear_exact(double a, double tau, double y0, double t) {
  const int n = static_cast<int>(std::floor(t / tau)) + 1;
  double y = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double arg = t - (k - 1) * tau;
    if (arg <= 0.0) break;
    y += std::pow(-a, k) * std::pow(arg, k) / factorial(k);
  }
  return y0 * y;
}

double histogram_variance(const EmpiricalPDF& e) {
  const auto c = e.centers();
  double m = 0.0, m2 = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    m += c[k] * e.probabilities[k];
    m2 += c[k] * c[k] * e.probabilities[k];
  }
  return m2 - m * m;
}

}  // namespace

TEST_SUITE("mc") {

TEST_CASE("OU ensemble variance and one-step correlation") {
  const double s = 0.25, dt = 0.01;
  const int n = 4000;
  double sum = 0.0, sum2 = 0.0, sum_lag = 0.0;
  for (int p = 0; p < n; ++p) {
    const auto path = simulate_ou(s, dt, 50, 1000 + p);
    sum += path.back();
    sum2 += path.back() * path.back();
    sum_lag += path.back() * path[path.size() - 2];
  }
  const double var = sum2 / n;
  const double target = 1.0 / (2 * s);
  CHECK(std::abs(var - target) < 3.0 * target * std::sqrt(2.0 / n));
  CHECK(std::abs(sum / n) < 3.0 * std::sqrt(target / n));
  CHECK(sum_lag / sum2 == doctest::Approx(std::exp(-dt / s)).epsilon(0.02));
}

TEST_CASE("OU time autocorrelation decays with the correlation time") {
  const double s = 0.1, dt = 0.005;
  const auto path = simulate_ou(s, dt, 400000, 5);
  const std::size_t lag = 20;  // one correlation time
  double c0 = 0.0, cl = 0.0;
  for (std::size_t i = 0; i + lag < path.size(); ++i) {
    c0 += path[i] * path[i];
    cl += path[i] * path[i + lag];
  }
  CHECK(cl / c0 == doctest::Approx(std::exp(-1.0)).epsilon(0.05));
  CHECK(path.size() == 400001);
}

TEST_CASE("delay buffer semantics") {
  DelayBuffer buf(0.3, 0.1, 7.0);
  CHECK(buf.lag() == 3);
  CHECK(buf.delayed() == 7.0);
  buf.push(1.0);
  buf.push(2.0);
  CHECK(buf.delayed() == 7.0);
  CHECK(buf.delayed_next(3.0) == 1.0);
  buf.push(3.0);
  CHECK(buf.delayed() == 1.0);
  DelayBuffer one(0.1, 0.1, 0.0);
  CHECK(one.lag() == 1);
  CHECK(one.delayed_next(5.0) == 5.0);
}

TEST_CASE("delay buffer integrates the linear delayed equation") {
  const double a = 1.3, tau = 0.4, y0 = 1.0, T = 2.0;
  for (double dt : {1e-3, 5e-4}) {
    DelayBuffer buf(tau, dt, y0);
    double y = y0;
    const auto steps = static_cast<int>(std::llround(T / dt));
    for (int k = 0; k < steps; ++k) {
      const double f0 = -a * buf.delayed();
      const double f1 = -a * buf.delayed_next(y);
      buf.push(y);
      y = y + 0.5 * dt * (f0 + f1);
    }
    CHECK(y == doctest::Approx(delayed_linear_exact(a, tau, y0, T)).epsilon(5e-5));
  }
}

TEST_CASE("noiseless SDDE follows the method-of-steps solution") {
  const double a = 1.3, tau = 0.4, T = 2.0, dt = 1e-3;
  const ScalarModel flat{Polynomial{0.0}, NoiseIntensity::additive(0.0), 0.1, {-2.0, 2.0}};
  MCConfig cfg;
  cfg.dt = dt;
  cfg.t_end = T;
  cfg.burn_in = T - 1.5 * dt;
  cfg.n_paths = 1;
  cfg.histogram_bins = 4000;
  cfg.x0 = 1.0;
  const EmpiricalPDF e = simulate_sdde(flat, {a, tau, 0.0}, cfg);
  REQUIRE(e.n_samples == 1);
  const double y = delayed_linear_exact(a, tau, 1.0, T);
  std::size_t k = 0;
  while (e.probabilities[k] == 0.0) ++k;
  CHECK(y >= e.edges[k]);
  CHECK(y <= e.edges[k + 1]);
}

TEST_CASE("linear potential: ensemble variance of the colored-noise OU system") {
  // dX = -X dt + sigma xi, Var X = sigma^2 / (2 (1 + s)).
  const double sigma = 0.8, s = 0.5;
  const ScalarModel lin{Polynomial{0.0, 0.0, 0.5}, NoiseIntensity::additive(sigma), s, {-5.0, 5.0}};
  MCConfig cfg;
  cfg.n_paths = 200;
  cfg.t_end = 60.0;
  cfg.burn_in = 5.0;
  cfg.histogram_bins = 400;
  cfg.sample_stride = 5;
  const double target = sigma * sigma / (2 * (1 + s));
  for (auto integrator : {Integrator::Heun, Integrator::Euler}) {
    cfg.integrator = integrator;
    const EmpiricalPDF e = simulate_sdde(lin, {}, cfg);
    CHECK(histogram_variance(e) == doctest::Approx(target).epsilon(0.05));
  }
}

TEST_CASE("seed determinism and job independence") {
  const ScalarModel m = presets::bistable();
  MCConfig cfg;
  cfg.n_paths = 24;
  cfg.t_end = 4.0;
  cfg.burn_in = 1.0;
  const EmpiricalPDF a = simulate_sdde(m, {1.0, 0.1, 1.0}, cfg);
  cfg.jobs = 3;
  const EmpiricalPDF b = simulate_sdde(m, {1.0, 0.1, 1.0}, cfg);
  CHECK(a.probabilities == b.probabilities);
  std::ostringstream sa, sb;
  write_csv(a, sa);
  write_csv(b, sb);
  CHECK(sa.str() == sb.str());
  cfg.seed = 2;
  const EmpiricalPDF c = simulate_sdde(m, {1.0, 0.1, 1.0}, cfg);
  CHECK(c.probabilities != a.probabilities);
}

TEST_CASE("zero noise collapses onto the attractor") {
  MCConfig cfg;
  cfg.n_paths = 4;
  cfg.t_end = 12.0;
  cfg.burn_in = 8.0;
  cfg.x0 = 0.3;
  const EmpiricalPDF e = simulate_sdde(presets::bistable().with_noise(0.0, 0.25), {}, cfg);
  double peak = 0.0, at = 0.0;
  const auto c = e.centers();
  for (std::size_t k = 0; k < c.size(); ++k)
    if (e.probabilities[k] > peak) peak = e.probabilities[k], at = c[k];
  CHECK(peak > 0.9);
  CHECK(std::abs(at - 1.0) < 0.05);
}

TEST_CASE("diverging paths are aborted and reported") {
  const ScalarModel unstable{Polynomial{0.0, 0.0, -2.0}, NoiseIntensity::additive(0.5), 0.1, {-5.0, 5.0}};
  MCConfig cfg;
  cfg.n_paths = 5;
  cfg.t_end = 20.0;
  cfg.burn_in = 1.0;
  cfg.x0 = 0.1;
  const EmpiricalPDF e = simulate_sdde(unstable, {}, cfg);
  CHECK(e.aborted_paths == 5);
  CHECK_FALSE(e.warnings.empty());
}

TEST_CASE("configuration validation") {
  MCConfig cfg;
  cfg.dt = 0.2;
  CHECK_THROWS_AS(simulate_sdde(presets::bistable(), {1.0, 0.1, 1.0}, cfg), ValidationError);
  cfg = MCConfig{};
  cfg.burn_in = cfg.t_end;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = MCConfig{};
  cfg.n_paths = 0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  CHECK_THROWS_AS(parse_integrator("rk4"), ValidationError);
  CHECK(parse_integrator(to_string(Integrator::Euler)) == Integrator::Euler);
}

TEST_CASE("rebin and L1 distance") {
  const std::vector<double> x{0.0, 1.0, 2.0, 3.0, 4.0};
  const std::vector<double> flat{0.25, 0.25, 0.25, 0.25, 0.25};
  const std::vector<double> edges{0.0, 1.0, 2.0, 4.0};
  const auto mass = rebin(x, flat, edges);
  CHECK(mass[0] == doctest::Approx(0.25));
  CHECK(mass[2] == doctest::Approx(0.5));
  const std::vector<double> ramp{0.0, 0.125, 0.25, 0.375, 0.5};
  const auto rm = rebin(x, ramp, std::vector<double>{0.0, 2.0, 4.0});
  CHECK(rm[0] == doctest::Approx(0.25));
  CHECK(rm[1] == doctest::Approx(0.75));

  const std::vector<double> p{0.5, 0.5, 0.0}, q{0.0, 0.0, 1.0};
  std::vector<std::string> warnings;
  CHECK(l1_distance(p, p) == 0.0);
  CHECK(l1_distance(p, q, &warnings) == 1.0);
  CHECK(warnings.size() == 1);
  CHECK(l1_distance(p, std::vector<double>{0.5, 0.0, 0.5}) == doctest::Approx(0.5));
}

TEST_CASE("rescaled form shares the histogram layout") {
  MCConfig cfg;
  cfg.n_paths = 8;
  cfg.t_end = 4.0;
  cfg.burn_in = 1.0;
  const EmpiricalPDF a = simulate_sdde(presets::bistable(), {1.0, 0.2, 1.0}, cfg);
  const EmpiricalPDF b = simulate_rescaled(presets::bistable(), {1.0, 0.2, 1.0}, cfg);
  CHECK(a.form == "sdde");
  CHECK(b.form == "rescaled");
  CHECK(a.edges == b.edges);
  const double d = l1_distance(a, b);
  CHECK(d >= 0.0);
  CHECK(d <= 1.0);
}

TEST_CASE("rescaled form without control is the uncontrolled simulation") {
  MCConfig cfg;
  cfg.n_paths = 16;
  cfg.t_end = 5.0;
  cfg.burn_in = 1.0;
  const EmpiricalPDF a = simulate_sdde(presets::bistable(), {}, cfg);
  const EmpiricalPDF b = simulate_rescaled(presets::bistable(), {}, cfg);
  CHECK(a.probabilities == b.probabilities);
}

TEST_CASE("halving dt stays within the Monte Carlo noise floor") {
  const ScalarModel m = presets::bistable();
  const ControlParams c{1.0, 0.1, 1.0};
  MCConfig cfg;
  cfg.n_paths = 10000;
  cfg.t_end = 6.0;
  cfg.burn_in = 3.0;
  cfg.sample_stride = 10;
  const EmpiricalPDF base = simulate_sdde(m, c, cfg);
  MCConfig other = cfg;
  other.seed = 2;
  const double noise = l1_distance(base, simulate_sdde(m, c, other));
  MCConfig half = cfg;
  half.dt = 0.5 * cfg.dt;
  half.sample_stride = 20;
  half.seed = 3;
  const double change = l1_distance(base, simulate_sdde(m, c, half));
  CHECK(change < 1.5 * noise);
}

}
