#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "noisectl/fpe.hpp"
#include "noisectl/model.hpp"

namespace noisectl {

enum class RegimeLabel { Bimodal, UnimodalInflated, UnimodalClean };
std::string to_string(RegimeLabel label);

struct ExtremaSet {
  enum class Method { AnalyticCubic, GridSearch };
  std::vector<double> maxima;  // ascending
  std::vector<double> minima;  // ascending
  Method method = Method::GridSearch;
};

struct RegimeReport {
  ExtremaSet extrema;
  int inflection_count = 0;
  RegimeLabel label = RegimeLabel::UnimodalClean;
  /// Maxima ordered by decreasing density.
  std::vector<double> peak_locations;
  std::vector<double> peak_heights;
  std::vector<std::string> notes;
};

/// Left-hand side of the critical-point equation of the stationary density,
///   V'(x) + sigma(x) (sigma A)'(x),
/// which reduces to V' + sigma^2 A' for additive noise. Its zeros are the
/// extrema of the density; where it is negative the density increases.
double pdf_extrema_condition(const EffectiveSystem& sys, const Closure& closure, double R, double x);

/// Coefficients of c3 x^3 - c1 x - a xhat = 0, the critical-point cubic of
/// the second-order closure for V = x^4/4 - x^2/2 with additive noise.
struct BistableCubic {
  double c1 = 0.0;
  double c3 = 0.0;
};
BistableCubic bistable_cubic(const EffectiveSystem& sys, double a, double R);

/// Closed-form extrema of the second-order density for the bistable family.
/// Falls back to a grid search if the cubic degenerates.
ExtremaSet bistable_extrema(const EffectiveSystem& sys, double R, const ControlParams& ctrl);

/// Extrema from sign changes of pdf_extrema_condition, refined by bisection.
ExtremaSet grid_search_extrema(const EffectiveSystem& sys, const Closure& closure, double R,
                               std::size_t n_samples = 4001);

/// Shift xhat placing a critical point of the density at x_a, for additive
/// noise: xhat = x_a + [V'(x_a) + sigma^2 A'(x_a, R)] / a.
double drift_cancelling_shift(const ScalarModel& model, double a, double tau, double x_a,
                              const Closure& closure, double R);

struct DriftCancellation {
  double xhat = 0.0;
  ControlParams control;
  StationaryPDF pdf;
  double argmax = 0.0;
  /// |argmax - x_a| <= grid spacing.
  bool peak_at_target = false;
  RegimeReport report;
};

/// Coupled fixed point in which the shift xhat(R) is re-derived from every
/// iterate, so the converged density has a critical point at x_a.
DriftCancellation cancel_peak_drift(const ScalarModel& model, double a, double tau, double x_a,
                                    ClosureOrder M, const FixedPointConfig& cfg,
                                    const QuadratureGrid& grid);

inline constexpr int kMaxInflectionSignChanges = 12;
inline constexpr double kInflectionDeadBand = 1e-9;
inline constexpr std::size_t kPlateauMerge = 3;

/// Regime of a density sampled on a uniform grid. The scale of `density`
/// is irrelevant.
RegimeReport classify_density(std::span<const double> x, std::span<const double> density);
RegimeReport classify_regime(const StationaryPDF& pdf);

struct RegimeRow {
  ControlParams ctrl;
  double sigma = 0.0;
  double s_cor = 0.0;
  double R = 0.0;
  double peak_x = 0.0;
  int n_maxima = 0;
  int n_inflections = 0;
  std::optional<RegimeLabel> label;  // empty for failed cells
  std::string error;
};

/// Peak coordinate of a classified density: |argmax| for a bimodal response
/// without control (symmetric peaks), the highest peak otherwise.
double peak_coordinate(const RegimeReport& report, const ControlParams& ctrl);

RegimeRow make_regime_row(const ControlParams& ctrl, double sigma, double s_cor, const StationaryPDF& pdf,
                          const RegimeReport& report);

/// Solves and classifies every (control, noise) combination. Failed cells
/// carry their error text instead of aborting the map.
std::vector<RegimeRow> peak_drift_map(const ScalarModel& model, std::span<const ControlParams> ctrls,
                                      std::span<const std::pair<double, double>> noises, ClosureOrder M,
                                      const FixedPointConfig& cfg, std::size_t grid_nodes = QuadratureGrid::kDefaultNodes,
                                      unsigned jobs = 1);

/// CSV columns a,tau,xhat,sigma,s_cor,R,peak_x,n_maxima,n_inflections,label.
void write_regime_csv(std::span<const RegimeRow> rows, std::ostream& out);

}  // namespace noisectl
