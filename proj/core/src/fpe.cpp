#include "noisectl/fpe.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "noisectl/error.hpp"

namespace noisectl {

ClosureOrder closure_from_int(int m) {
  if (m == 0) return ClosureOrder::Zero;
  if (m == 2) return ClosureOrder::Two;
  throw ValidationError("closure order M must be 0 or 2, got " + std::to_string(m));
}

std::string to_string(const Closure& closure) {
  return closure ? std::to_string(to_int(*closure)) : std::string("white");
}

void FixedPointConfig::validate() const {
  if (!(tol > 0.0)) throw ValidationError("fixed-point tolerance must be positive");
  if (max_iter < 1) throw ValidationError("fixed-point max_iter must be >= 1");
  if (!(relaxation > 0.0 && relaxation <= 1.0))
    throw ValidationError("fixed-point relaxation must lie in (0, 1]");
}

double StationaryPDF::argmax() const {
  const auto it = std::ranges::max_element(density);
  return grid[static_cast<std::size_t>(it - density.begin())];
}

double StationaryPDF::expectation(const std::function<double(double)>& g) const {
  std::vector<double> v(density.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = g(grid[i]) * density[i];
  return simpson(v, grid.spacing());
}

namespace {

void check_stationarity(double s_cor, double R) {
  if (s_cor * R >= 1.0) {
    std::ostringstream os;
    os << "stationarity condition R < 1/s_cor violated: R = " << R << ", 1/s_cor = " << 1.0 / s_cor;
    throw StationarityError(os.str(), R);
  }
}

}  // namespace

double stationary_AM_from_zeta(double s_cor, ClosureOrder M, double R, double zeta_value) {
  check_stationarity(s_cor, R);
  const double denom = 1.0 - s_cor * R;
  const double u = s_cor * (zeta_value - R) / denom;
  double sum = 1.0;
  if (M == ClosureOrder::Two) sum += u + u * u;
  return 0.5 * sum / denom;
}

double stationary_AM_dzeta(double s_cor, ClosureOrder M, double R, double zeta_value) {
  check_stationarity(s_cor, R);
  if (M == ClosureOrder::Zero) return 0.0;
  const double denom = 1.0 - s_cor * R;
  const double u = s_cor * (zeta_value - R) / denom;
  // d/dzeta of (1 + u + u^2)/(2 denom), du/dzeta = s/denom
  return 0.5 * (1.0 + 2.0 * u) * s_cor / (denom * denom);
}

double stationary_AM(const EffectiveSystem& sys, ClosureOrder M, double R, double x) {
  return stationary_AM_from_zeta(sys.eff_scor, M, R, zeta(sys, x));
}

double diffusion_factor(const EffectiveSystem& sys, const Closure& closure, double R, double x) {
  if (!closure) return 0.5;
  return stationary_AM(sys, *closure, R, x);
}

double diffusion_factor_dx(const EffectiveSystem& sys, const Closure& closure, double R, double x) {
  if (!closure || *closure == ClosureOrder::Zero) return 0.0;
  return stationary_AM_dzeta(sys.eff_scor, *closure, R, zeta(sys, x)) * zeta_prime(sys, x);
}

namespace {

/// R-independent samples of the system at grid nodes and cell midpoints.
class SampledSystem {
 public:
  SampledSystem(const EffectiveSystem& sys, const QuadratureGrid& grid) : s_cor_(sys.eff_scor), h_(grid.spacing()) {
    const std::size_t n = grid.size();
    nodes_.resize(n);
    mids_.resize(n - 1);
    for (std::size_t i = 0; i < n; ++i) nodes_[i] = sample(sys, grid[i]);
    for (std::size_t i = 0; i + 1 < n; ++i) mids_[i] = sample(sys, grid[i] + 0.5 * h_);
  }

  std::vector<double> density(const Closure& closure, double R) const {
    if (closure) check_stationarity(s_cor_, R);
    const std::size_t n = nodes_.size();
    std::vector<double> g(n), gm(n - 1), amp(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double A = factor(closure, R, nodes_[i].zeta);
      amp[i] = 1.0 / (std::abs(nodes_[i].sigma) * A);
      g[i] = nodes_[i].vprime / (nodes_[i].sigma * nodes_[i].sigma * A);
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double A = factor(closure, R, mids_[i].zeta);
      gm[i] = mids_[i].vprime / (mids_[i].sigma * mids_[i].sigma * A);
    }
    std::vector<double> phi = cumulative_simpson(g, gm, h_);
    const double phi_min = *std::ranges::min_element(phi);
    if (!std::isfinite(phi_min))
      throw ConvergenceError("antiderivative of the drift/diffusion ratio is not finite");
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) f[i] = amp[i] * std::exp(-(phi[i] - phi_min));
    return f;
  }

  double moment(std::span<const double> f) const {
    std::vector<double> zf(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) zf[i] = nodes_[i].zeta * f[i];
    const double den = simpson(f, h_);
    if (!(den > 0.0) || !std::isfinite(den))
      throw ConvergenceError("density integrates to zero or non-finite value; check the domain");
    return simpson(zf, h_) / den;
  }

  double h() const noexcept { return h_; }

 private:
  struct Sample {
    double zeta;
    double vprime;
    double sigma;
  };

  static Sample sample(const EffectiveSystem& sys, double x) {
    return {zeta(sys, x), sys.eff_potential.derivative_at(x, 1), sys.eff_intensity(x)};
  }

  double factor(const Closure& closure, double R, double z) const {
    if (!closure) return 0.5;
    const double A = stationary_AM_from_zeta(s_cor_, *closure, R, z);
    if (!(A > 0.0) || !std::isfinite(A)) {
      std::ostringstream os;
      os << "diffusion coefficient not positive (A = " << A << ", zeta = " << z << ", R = " << R << ")";
      throw ConvergenceError(os.str());
    }
    return A;
  }

  double s_cor_;
  double h_;
  std::vector<Sample> nodes_;
  std::vector<Sample> mids_;
};

StationaryPDF finish(const QuadratureGrid& grid, std::vector<double> f, double R, const Closure& closure,
                     double eff_scor) {
  StationaryPDF pdf(grid);
  const double integral = simpson(f, grid.spacing());
  if (!(integral > 0.0) || !std::isfinite(integral))
    throw ConvergenceError("density integrates to zero or non-finite value; check the domain");
  const double c = 1.0 / integral;
  for (double& v : f) v *= c;
  pdf.density = std::move(f);
  pdf.R = R;
  pdf.closure = closure;
  pdf.eff_scor = eff_scor;
  pdf.norm_constant = c;
  const double peak = *std::ranges::max_element(pdf.density);
  const double edge = std::max(pdf.density.front(), pdf.density.back());
  if (edge > kTruncationRatio * peak) {
    pdf.truncation_warning = true;
    std::ostringstream os;
    os << "domain truncation: endpoint density ratio " << edge / peak << " exceeds "
       << kTruncationRatio;
    pdf.warnings.push_back(os.str());
  }
  return pdf;
}

}  // namespace

std::vector<double> unnormalized_density(const EffectiveSystem& sys, const Closure& closure,
                                         double R, const QuadratureGrid& grid) {
  return SampledSystem(sys, grid).density(closure, R);
}

double self_consistency_I(const EffectiveSystem& sys, const Closure& closure, double R,
                          const QuadratureGrid& grid) {
  const SampledSystem sampled(sys, grid);
  return sampled.moment(sampled.density(closure, R));
}

StationaryPDF solve_white_noise(const EffectiveSystem& sys, const QuadratureGrid& grid) {
  const SampledSystem sampled(sys, grid);
  auto f = sampled.density(std::nullopt, 0.0);
  const double R = sampled.moment(f);
  return finish(grid, std::move(f), R, std::nullopt, sys.eff_scor);
}

StationaryPDF solve_stationary_coupled(const std::function<EffectiveSystem(double)>& system_for,
                                       const EffectiveSystem& seed, ClosureOrder M,
                                       const FixedPointConfig& cfg, const QuadratureGrid& grid) {
  cfg.validate();
  std::vector<std::string> notes;
  const SampledSystem seed_samples(seed, grid);
  double R = seed_samples.moment(seed_samples.density(std::nullopt, 0.0));
  bool clamped = false;
  {
    const double s = system_for(R).eff_scor;
    if (s * R >= 1.0) {
      std::ostringstream os;
      os << "white-noise seed R0 = " << R << " violates R < 1/s_cor; clamped to 0.9/s_cor";
      R = 0.9 / s;
      clamped = true;
      notes.push_back(os.str());
    }
  }

  double omega = cfg.relaxation;
  bool damped = false;
  std::vector<double> residuals;
  int iterations = 0;
  bool converged = false;
  for (int n = 1; n <= cfg.max_iter; ++n) {
    const EffectiveSystem sys = system_for(R);
    const SampledSystem sampled(sys, grid);
    const double update = sampled.moment(sampled.density(M, R));
    if (!std::isfinite(update)) throw ConvergenceError("self-consistency map returned a non-finite value");
    const double residual = update - R;
    residuals.push_back(residual);
    iterations = n;
    const std::size_t k = residuals.size();
    if (cfg.auto_damp && !damped && omega == 1.0 && k >= 3 &&
        residuals[k - 1] * residuals[k - 2] < 0.0 && residuals[k - 2] * residuals[k - 3] < 0.0) {
      omega = 0.5;
      damped = true;
      notes.push_back("oscillating residuals detected; relaxation reduced to 0.5");
    }
    const double next = (1.0 - omega) * R + omega * update;
    if (sys.eff_scor * next >= 1.0) {
      std::ostringstream os;
      os << "iteration " << n << " left the admissible region: R = " << next
         << " >= 1/s_cor = " << 1.0 / sys.eff_scor;
      throw StationarityError(os.str(), next);
    }
    R = next;
    if (std::abs(residual) <= cfg.tol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    std::ostringstream os;
    os << "fixed-point iteration did not converge in " << cfg.max_iter << " iterations (last R = " << R
       << ", last residual = " << residuals.back() << ")";
    throw ConvergenceError(os.str());
  }

  const EffectiveSystem final_sys = system_for(R);
  StationaryPDF pdf = finish(grid, SampledSystem(final_sys, grid).density(M, R), R, M, final_sys.eff_scor);
  pdf.iterations_used = iterations;
  pdf.relaxation_used = omega;
  pdf.damping_engaged = damped;
  pdf.seed_clamped = clamped;
  pdf.warnings.insert(pdf.warnings.begin(), notes.begin(), notes.end());
  return pdf;
}

StationaryPDF solve_stationary(const EffectiveSystem& sys, ClosureOrder M, const FixedPointConfig& cfg,
                               const QuadratureGrid& grid) {
  return solve_stationary_coupled([&sys](double) { return sys; }, sys, M, cfg, grid);
}

void write_csv(const StationaryPDF& pdf, std::ostream& out) {
  const auto old_precision = out.precision(17);
  out << "# R=" << pdf.R << ", M=" << to_string(pdf.closure) << ", iterations_used=" << pdf.iterations_used
      << ", norm_constant=" << pdf.norm_constant << "\n";
  out << "x,p0\n";
  for (std::size_t i = 0; i < pdf.density.size(); ++i) out << pdf.grid[i] << "," << pdf.density[i] << "\n";
  out.precision(old_precision);
}

void write_csv(const StationaryPDF& pdf, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  write_csv(pdf, out);
  if (!out) throw IoError("write failed for " + path.string());
}

DensityTable read_density_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  DensityTable t;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw IoError("malformed CSV row in " + path.string() + ": " + line);
    try {
      const double x = std::stod(line.substr(0, comma));
      const double p = std::stod(line.substr(comma + 1));
      t.x.push_back(x);
      t.p.push_back(p);
    } catch (const std::invalid_argument&) {
      if (t.x.empty()) continue;  // header row
      throw IoError("malformed CSV row in " + path.string() + ": " + line);
    }
  }
  if (t.x.size() < 2) throw IoError("no density rows in " + path.string());
  return t;
}

}  // namespace noisectl
