#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "noisectl/fpe.hpp"
#include "noisectl/model.hpp"

namespace noisectl {

enum class Integrator { Euler, Heun };
std::string to_string(Integrator integrator);
Integrator parse_integrator(const std::string& text);

struct MCConfig {
  double dt = 1e-3;
  double t_end = 200.0;
  double burn_in = 100.0;
  std::size_t n_paths = 10000;
  std::uint64_t seed = 1;
  std::size_t histogram_bins = 200;
  /// Keep one sample every `sample_stride` steps after burn-in.
  std::size_t sample_stride = 1;
  Integrator integrator = Integrator::Heun;
  /// Initial state (and constant pre-history). Defaults to the rightmost
  /// global minimizer of V on the domain.
  std::optional<double> x0;
  unsigned jobs = 1;

  /// `tau` > 0 additionally requires dt < tau.
  void validate(double tau = 0.0) const;

  static MCConfig bistable_defaults();
  static MCConfig laser_defaults();
};

/// Ring of the last ceil(tau/dt) states. Reads before enough steps have
/// been taken return the constant initial history.
class DelayBuffer {
 public:
  DelayBuffer(double tau, double dt, double x0);

  std::size_t lag() const noexcept { return ring_.size(); }
  /// State `lag()` steps before the current one.
  double delayed() const noexcept { return ring_[cursor_]; }
  /// State `lag() - 1` steps before the current one, i.e. the delayed value
  /// one step ahead; equals `current` when lag() == 1.
  double delayed_next(double current) const noexcept {
    return ring_.size() == 1 ? current : ring_[(cursor_ + 1) % ring_.size()];
  }
  /// Commit the current state before advancing.
  void push(double current) noexcept {
    ring_[cursor_] = current;
    cursor_ = (cursor_ + 1) % ring_.size();
  }

 private:
  std::vector<double> ring_;
  std::size_t cursor_ = 0;
};

struct EmpiricalPDF {
  std::vector<double> edges;
  std::vector<double> probabilities;  // sums to 1 over the in-domain samples
  std::uint64_t n_samples = 0;        // in-domain samples
  std::uint64_t n_outside = 0;
  std::size_t aborted_paths = 0;
  std::vector<std::size_t> aborted_path_ids;  // first few
  // run metadata
  std::string form;
  std::uint64_t seed = 0;
  double dt = 0.0;
  std::size_t n_paths = 0;
  Integrator integrator = Integrator::Heun;
  std::vector<std::string> warnings;

  std::vector<double> centers() const;
};

/// Exact OU recursion xi_{k+1} = xi_k e^{-dt/s} + sqrt((1 - e^{-2dt/s})/(2s)) N(0,1)
/// started from the stationary law N(0, 1/(2s)). Returns n_steps + 1 values.
std::vector<double> simulate_ou(double s_cor, double dt, std::size_t n_steps, std::uint64_t seed);

/// Controlled SDDE dX = [-V'(X) - a (X(t - tau) - xhat) + sigma(X) xi] dt
/// with OU input, constant history on [-tau, 0].
EmpiricalPDF simulate_sdde(const ScalarModel& model, const ControlParams& ctrl, const MCConfig& cfg);

/// Non-delayed rescaled SDE dX/ds = -Veff'(X) + sigma_eff(X) xi_eff with
/// OU input of correlation time s_cor_eff. Time in cfg is read as s.
EmpiricalPDF simulate_rescaled(const ScalarModel& model, const ControlParams& ctrl, const MCConfig& cfg);

/// Bin masses of a sampled density integrated over each histogram cell
/// (piecewise-linear interpolant), renormalized over the histogram range.
std::vector<double> rebin(std::span<const double> x, std::span<const double> p,
                          std::span<const double> edges);

/// Half the L1 distance between bin probability vectors, in [0, 1].
/// Disjoint supports give 1 and append a warning when `warnings` is given.
double l1_distance(std::span<const double> p, std::span<const double> q,
                   std::vector<std::string>* warnings = nullptr);
double l1_distance(const EmpiricalPDF& p, const EmpiricalPDF& q, std::vector<std::string>* warnings = nullptr);
double l1_distance(const EmpiricalPDF& p, const StationaryPDF& q, std::vector<std::string>* warnings = nullptr);
double l1_distance(const StationaryPDF& p, const StationaryPDF& q, std::vector<std::string>* warnings = nullptr);
double l1_distance(const EmpiricalPDF& p, const DensityTable& q, std::vector<std::string>* warnings = nullptr);

/// "bin_center,probability" with run metadata as leading comment lines.
void write_csv(const EmpiricalPDF& pdf, std::ostream& out);
void write_csv(const EmpiricalPDF& pdf, const std::filesystem::path& path);

}  // namespace noisectl
