#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "noisectl/analysis.hpp"
#include "noisectl/fpe.hpp"
#include "noisectl/model.hpp"

namespace noisectl {

struct SweepSpec {
  std::vector<double> a_values;
  std::vector<double> tau_values;
  std::vector<double> scor_values;
  double sigma = 1.0;
  ClosureOrder M = ClosureOrder::Two;
  /// Re-centre every controlled cell so its density peaks at x_a.
  bool drift_cancel = false;
  double x_a = 1.0;
  /// Control target when drift_cancel is off.
  double xhat = 1.0;
  std::string model_name = "bistable";
  ScalarModel model = presets::bistable();
  std::size_t grid_nodes = QuadratureGrid::kDefaultNodes;
  FixedPointConfig solver;
  unsigned jobs = 1;

  void validate() const;

  /// a in [0, 4] step 0.1, tau in [0.05, 0.45] step 0.05,
  /// s_cor in [0.1, 0.5] step 0.05, sigma = 1, bistable model.
  static SweepSpec benchmark_grid();
};

/// Inclusive arithmetic range lo, lo + step, ... with values snapped to the
/// step lattice so that 0.1 * 3 prints as 0.3.
std::vector<double> linspace_step(double lo, double hi, double step);

enum class CellStatus { Ok, Skipped, Failed };
std::string to_string(CellStatus status);

struct RegimeCell {
  double a = 0.0;
  double tau = 0.0;
  double s_cor = 0.0;
  CellStatus status = CellStatus::Ok;
  std::optional<RegimeLabel> label;
  double xhat = 0.0;
  double R = 0.0;
  double peak_x = 0.0;
  int n_inflections = 0;
  std::string reason;  // skip or failure cause
};

/// Smallest swept gain reaching each regime in one (tau, s_cor) column.
struct RegimeBoundary {
  double tau = 0.0;
  double s_cor = 0.0;
  std::optional<double> a_unimodal;
  std::optional<double> a_clean;
};

struct RegimeSurface {
  SweepSpec spec;
  /// Indexed ((tau_idx * n_scor) + scor_idx) * n_a + a_idx.
  std::vector<RegimeCell> cells;
  std::vector<RegimeBoundary> boundaries;
  std::size_t n_ok = 0;
  std::size_t n_skipped = 0;
  std::size_t n_failed = 0;
  /// Non-monotone regime sequences along ascending a.
  std::vector<std::string> findings;
  double elapsed_seconds = 0.0;

  const RegimeCell& at(std::size_t tau_idx, std::size_t scor_idx, std::size_t a_idx) const;
};

/// One cell of the sweep, solved and classified. Never throws for solver
/// failures; they are reported through the cell status.
RegimeCell evaluate_cell(const SweepSpec& spec, double a, double tau, double s_cor);

RegimeSurface run_sweep(const SweepSpec& spec);

/// Bisection on a in [a_lo, a_hi] for the smallest gain whose label is at
/// least `target` (Bimodal < UnimodalInflated < UnimodalClean). Requires the
/// bracket to straddle the transition.
double refine_boundary(const SweepSpec& spec, double tau, double s_cor, double a_lo, double a_hi,
                       RegimeLabel target, double tol = 1e-3);

/// a,tau,s_cor,label,R,peak_x,n_inflections
void write_surface_csv(const RegimeSurface& surface, std::ostream& out);
/// tau,s_cor,a_unimodal,a_clean
void write_boundary_csv(const RegimeSurface& surface, std::ostream& out);
/// Writes the surface to `path` and the boundaries next to it as
/// <stem>_boundaries.csv. Returns the boundary path.
std::filesystem::path export_surface(const RegimeSurface& surface, const std::filesystem::path& path);

/// JSON run manifest: sweep settings, library version, counts, findings, timings.
std::string manifest_json(const RegimeSurface& surface);
void write_manifest(const RegimeSurface& surface, const std::filesystem::path& path);

}  // namespace noisectl
