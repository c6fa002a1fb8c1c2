#include "noisectl/mc.hpp"

#include <algorithm>
#include <boost/random/normal_distribution.hpp>
#include <cmath>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "noisectl/error.hpp"

namespace noisectl {

std::string to_string(Integrator integrator) {
  return integrator == Integrator::Euler ? "euler" : "heun";
}

Integrator parse_integrator(const std::string& text) {
  if (text == "euler") return Integrator::Euler;
  if (text == "heun") return Integrator::Heun;
  throw ValidationError("unknown integrator '" + text + "' (expected euler | heun)");
}

void MCConfig::validate(double tau) const {
  if (!(dt > 0.0)) throw ValidationError("mc: dt must be positive");
  if (!(t_end > 0.0)) throw ValidationError("mc: t_end must be positive");
  if (!(burn_in >= 0.0 && burn_in < t_end)) throw ValidationError("mc: burn_in must lie in [0, t_end)");
  if (n_paths < 1) throw ValidationError("mc: n_paths must be >= 1");
  if (histogram_bins < 10) throw ValidationError("mc: histogram_bins must be >= 10");
  if (sample_stride < 1) throw ValidationError("mc: sample_stride must be >= 1");
  if (tau > 0.0 && !(dt < tau)) {
    std::ostringstream os;
    os << "mc: dt = " << dt << " must be smaller than the delay tau = " << tau;
    throw ValidationError(os.str());
  }
}

MCConfig MCConfig::bistable_defaults() { return MCConfig{}; }

MCConfig MCConfig::laser_defaults() {
  MCConfig cfg;
  cfg.dt = 2e-4;
  cfg.t_end = 5.0;
  cfg.burn_in = 2.5;
  return cfg;
}

DelayBuffer::DelayBuffer(double tau, double dt, double x0) {
  const auto lag = static_cast<std::size_t>(std::ceil(tau / dt - 1e-9));
  ring_.assign(std::max<std::size_t>(lag, 1), x0);
}

std::vector<double> EmpiricalPDF::centers() const {
  std::vector<double> c(probabilities.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = 0.5 * (edges[i] + edges[i + 1]);
  return c;
}

namespace {

using Engine = std::mt19937_64;

Engine path_engine(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x6e6f6973u};
  return Engine(seq);
}

/// Exactly discretized scalar OU process of unit white-noise forcing.
class OUProcess {
 public:
  OUProcess(double s_cor, double dt)
      : decay_(std::exp(-dt / s_cor)),
        kick_(std::sqrt(-std::expm1(-2.0 * dt / s_cor) / (2.0 * s_cor))),
        stationary_sd_(std::sqrt(1.0 / (2.0 * s_cor))) {}

  template <typename Normal>
  double initial(Normal& normal) const {
    return stationary_sd_ * normal();
  }
  template <typename Normal>
  double step(double xi, Normal& normal) const {
    return xi * decay_ + kick_ * normal();
  }

 private:
  double decay_;
  double kick_;
  double stationary_sd_;
};

struct Histogram {
  double lo, hi, inv_width;
  std::vector<std::uint64_t> counts;
  std::uint64_t outside = 0;

  Histogram(Interval dom, std::size_t bins)
      : lo(dom.lo), hi(dom.hi), inv_width(static_cast<double>(bins) / dom.width()), counts(bins, 0) {}

  void add(double x) {
    if (!(x >= lo && x <= hi)) {
      ++outside;
      return;
    }
    auto k = static_cast<std::size_t>((x - lo) * inv_width);
    if (k >= counts.size()) k = counts.size() - 1;
    ++counts[k];
  }
};

/// Ensemble driver shared by every equation form. `drift(x, x_delayed, xi)`
/// is the full right-hand side; lag 0 means the control (if any) acts on the
/// current state.
template <typename Drift>
EmpiricalPDF run_ensemble(const Drift& drift, double tau, double s_cor, double x0, Interval domain,
                          const MCConfig& cfg, std::string form) {
  const auto n_steps = static_cast<std::size_t>(std::llround(cfg.t_end / cfg.dt));
  const auto burn_steps = static_cast<std::size_t>(std::llround(cfg.burn_in / cfg.dt));
  const bool delayed = tau > 0.0;
  const double blowup = 1e3 * domain.width() + std::max(std::abs(domain.lo), std::abs(domain.hi));
  const OUProcess ou(s_cor, cfg.dt);
  const double dt = cfg.dt;
  const bool heun = cfg.integrator == Integrator::Heun;

  struct Partial {
    Histogram hist;
    std::vector<std::size_t> aborted;
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(cfg.jobs, static_cast<unsigned>(cfg.n_paths)));
  std::vector<Partial> partials(jobs, Partial{Histogram(domain, cfg.histogram_bins), {}});
  std::vector<std::exception_ptr> errors(jobs);

  auto worker = [&](unsigned w) {
    try {
      Partial& part = partials[w];
      boost::random::normal_distribution<double> gauss;
      for (std::size_t p = w; p < cfg.n_paths; p += jobs) {
        Engine rng = path_engine(cfg.seed, p);
        gauss.reset();
        auto normal = [&] { return gauss(rng); };
        double xi = ou.initial(normal);
        double x = x0;
        DelayBuffer history(delayed ? tau : cfg.dt, cfg.dt, x0);
        for (std::size_t k = 0; k < n_steps; ++k) {
          const double xi_next = ou.step(xi, normal);
          const double xd = delayed ? history.delayed() : x;
          const double f0 = drift(x, xd, xi);
          double x_next = x + dt * f0;
          if (heun) {
            const double xd_next = delayed ? history.delayed_next(x) : x_next;
            x_next = x + 0.5 * dt * (f0 + drift(x_next, xd_next, xi_next));
          }
          if (delayed) history.push(x);
          x = x_next;
          xi = xi_next;
          if (std::isnan(x)) {
            std::ostringstream os;
            os << "mc: NaN state in path " << p << " (seed " << cfg.seed << ") at step " << k + 1;
            throw ConvergenceError(os.str());
          }
          if (std::abs(x) > blowup) {
            part.aborted.push_back(p);
            break;
          }
          if (k + 1 > burn_steps && (k + 1 - burn_steps) % cfg.sample_stride == 0) part.hist.add(x);
        }
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (jobs == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < jobs; ++w) pool.emplace_back(worker, w);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  EmpiricalPDF out;
  const std::size_t bins = cfg.histogram_bins;
  std::vector<std::uint64_t> counts(bins, 0);
  std::vector<std::size_t> aborted;
  for (const Partial& part : partials) {
    for (std::size_t k = 0; k < bins; ++k) counts[k] += part.hist.counts[k];
    out.n_outside += part.hist.outside;
    aborted.insert(aborted.end(), part.aborted.begin(), part.aborted.end());
  }
  std::ranges::sort(aborted);
  out.aborted_paths = aborted.size();
  aborted.resize(std::min<std::size_t>(aborted.size(), 10));
  out.aborted_path_ids = std::move(aborted);
  out.edges.resize(bins + 1);
  for (std::size_t k = 0; k <= bins; ++k)
    out.edges[k] = domain.lo + domain.width() * static_cast<double>(k) / static_cast<double>(bins);
  out.edges.back() = domain.hi;
  for (auto c : counts) out.n_samples += c;
  out.probabilities.assign(bins, 0.0);
  if (out.n_samples > 0)
    for (std::size_t k = 0; k < bins; ++k)
      out.probabilities[k] = static_cast<double>(counts[k]) / static_cast<double>(out.n_samples);
  else
    out.warnings.push_back("no samples landed inside the domain");
  if (out.aborted_paths > 0) {
    std::ostringstream os;
    os << out.aborted_paths << " path(s) diverged and were aborted (first id " << out.aborted_path_ids.front()
       << ", seed " << cfg.seed << ")";
    out.warnings.push_back(os.str());
  }
  if (cfg.dt > 0.1 * s_cor) {
    std::ostringstream os;
    os << "dt = " << cfg.dt << " is not small against the correlation time " << s_cor;
    out.warnings.push_back(os.str());
  }
  out.form = std::move(form);
  out.seed = cfg.seed;
  out.dt = cfg.dt;
  out.n_paths = cfg.n_paths;
  out.integrator = cfg.integrator;
  return out;
}

double default_initial_state(const ScalarModel& model) {
  constexpr int kSamples = 20001;
  const double h = model.domain.width() / (kSamples - 1);
  double best = model.potential(model.domain.lo);
  for (int i = 1; i < kSamples; ++i) best = std::min(best, model.potential(model.domain.lo + i * h));
  const double slack = 1e-9 * std::max(1.0, std::abs(best));
  double x = model.domain.lo;
  for (int i = 0; i < kSamples; ++i) {
    const double xi = model.domain.lo + i * h;
    if (model.potential(xi) <= best + slack) x = xi;
  }
  // Newton polish on V'.
  for (int it = 0; it < 20; ++it) {
    const double d2 = model.potential.derivative_at(x, 2);
    if (d2 <= 0.0) break;
    const double step = model.potential.derivative_at(x, 1) / d2;
    if (!model.domain.contains(x - step)) break;
    x -= step;
    if (std::abs(step) < 1e-15) break;
  }
  return x;
}

}  // namespace

std::vector<double> simulate_ou(double s_cor, double dt, std::size_t n_steps, std::uint64_t seed) {
  if (!(s_cor > 0.0) || !(dt > 0.0)) throw ValidationError("simulate_ou: s_cor and dt must be positive");
  const OUProcess ou(s_cor, dt);
  Engine rng = path_engine(seed, 0);
  boost::random::normal_distribution<double> gauss;
  auto normal = [&] { return gauss(rng); };
  std::vector<double> path(n_steps + 1);
  path[0] = ou.initial(normal);
  for (std::size_t k = 0; k < n_steps; ++k) path[k + 1] = ou.step(path[k], normal);
  return path;
}

EmpiricalPDF simulate_sdde(const ScalarModel& model, const ControlParams& ctrl, const MCConfig& cfg) {
  model.validate(/*require_nonvanishing=*/false);
  ctrl.validate();
  cfg.validate(ctrl.tau);
  const Polynomial dV = model.potential.derivative();
  const Polynomial shape = model.intensity.shape();
  const double sigma = model.intensity.sigma();
  const double a = ctrl.a, xhat = ctrl.xhat;
  auto drift = [&](double x, double xd, double xi) { return -dV(x) - a * (xd - xhat) + sigma * shape(x) * xi; };
  const double x0 = cfg.x0.value_or(default_initial_state(model));
  return run_ensemble(drift, ctrl.tau, model.s_cor, x0, model.domain, cfg, a == 0.0 ? "uncontrolled" : "sdde");
}

EmpiricalPDF simulate_rescaled(const ScalarModel& model, const ControlParams& ctrl, const MCConfig& cfg) {
  model.validate(/*require_nonvanishing=*/false);
  cfg.validate();
  const EffectiveSystem sys = make_effective(model, ctrl);
  const Polynomial dV = sys.eff_potential.derivative();
  const Polynomial shape = sys.eff_intensity.shape();
  const double sigma = sys.eff_intensity.sigma();
  auto drift = [&](double x, double, double xi) { return -dV(x) + sigma * shape(x) * xi; };
  const double x0 = cfg.x0.value_or(default_initial_state(model));
  return run_ensemble(drift, 0.0, sys.eff_scor, x0, model.domain, cfg, "rescaled");
}

std::vector<double> rebin(std::span<const double> x, std::span<const double> p, std::span<const double> edges) {
  if (x.size() != p.size() || x.size() < 2) throw ValidationError("rebin: need >= 2 matching samples");
  if (edges.size() < 2) throw ValidationError("rebin: need >= 2 edges");
  std::vector<double> cum(x.size(), 0.0);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) cum[i + 1] = cum[i] + 0.5 * (x[i + 1] - x[i]) * (p[i] + p[i + 1]);
  auto cdf = [&](double y) {
    if (y <= x.front()) return 0.0;
    if (y >= x.back()) return cum.back();
    const auto it = std::upper_bound(x.begin(), x.end(), y);
    const std::size_t i = static_cast<std::size_t>(it - x.begin()) - 1;
    const double h = x[i + 1] - x[i];
    const double u = y - x[i];
    return cum[i] + u * p[i] + 0.5 * u * u / h * (p[i + 1] - p[i]);
  };
  std::vector<double> mass(edges.size() - 1);
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    mass[k] = std::max(0.0, cdf(edges[k + 1]) - cdf(edges[k]));
    total += mass[k];
  }
  if (total > 0.0)
    for (double& m : mass) m /= total;
  return mass;
}

double l1_distance(std::span<const double> p, std::span<const double> q, std::vector<std::string>* warnings) {
  if (p.size() != q.size()) throw ValidationError("l1_distance: probability vectors differ in length");
  double sp = 0.0, sq = 0.0, overlap = 0.0, d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    sp += p[i];
    sq += q[i];
    overlap += std::min(p[i], q[i]);
    d += std::abs(p[i] - q[i]);
  }
  if (sp <= 0.0 || sq <= 0.0 || overlap <= 0.0) {
    if (warnings) warnings->push_back("l1_distance: supports are disjoint");
    return 1.0;
  }
  return std::clamp(0.5 * d, 0.0, 1.0);
}

double l1_distance(const EmpiricalPDF& p, const EmpiricalPDF& q, std::vector<std::string>* warnings) {
  if (p.edges != q.edges) throw ValidationError("l1_distance: histograms use different bin edges");
  return l1_distance(p.probabilities, q.probabilities, warnings);
}

double l1_distance(const EmpiricalPDF& p, const StationaryPDF& q, std::vector<std::string>* warnings) {
  return l1_distance(p.probabilities, rebin(q.grid.nodes(), q.density, p.edges), warnings);
}

double l1_distance(const EmpiricalPDF& p, const DensityTable& q, std::vector<std::string>* warnings) {
  return l1_distance(p.probabilities, rebin(q.x, q.p, p.edges), warnings);
}

double l1_distance(const StationaryPDF& p, const StationaryPDF& q, std::vector<std::string>* warnings) {
  const double lo = std::min(p.grid[0], q.grid[0]);
  const double hi = std::max(p.grid[p.grid.size() - 1], q.grid[q.grid.size() - 1]);
  const std::size_t bins = std::max(p.grid.size(), q.grid.size()) - 1;
  std::vector<double> edges(bins + 1);
  for (std::size_t k = 0; k <= bins; ++k) edges[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(bins);
  return l1_distance(rebin(p.grid.nodes(), p.density, edges), rebin(q.grid.nodes(), q.density, edges), warnings);
}

void write_csv(const EmpiricalPDF& pdf, std::ostream& out) {
  const auto old_precision = out.precision(17);
  out << "# form=" << pdf.form << ", seed=" << pdf.seed << ", dt=" << pdf.dt << ", n_paths=" << pdf.n_paths
      << ", integrator=" << to_string(pdf.integrator) << "\n";
  out << "# n_samples=" << pdf.n_samples << ", n_outside=" << pdf.n_outside << ", aborted_paths=" << pdf.aborted_paths
      << "\n";
  out << "bin_center,probability\n";
  const auto c = pdf.centers();
  for (std::size_t k = 0; k < c.size(); ++k) out << c[k] << "," << pdf.probabilities[k] << "\n";
  out.precision(old_precision);
}

void write_csv(const EmpiricalPDF& pdf, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  write_csv(pdf, out);
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace noisectl
