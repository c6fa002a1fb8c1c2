#include "noisectl/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "noisectl/cubic.hpp"
#include "noisectl/error.hpp"
#include "noisectl/parallel.hpp"

namespace noisectl {

std::string to_string(RegimeLabel label) {
  switch (label) {
    case RegimeLabel::Bimodal:
      return "bimodal";
    case RegimeLabel::UnimodalInflated:
      return "unimodal-inflated";
    case RegimeLabel::UnimodalClean:
      return "unimodal-clean";
  }
  return "unknown";
}

double pdf_extrema_condition(const EffectiveSystem& sys, const Closure& closure, double R, double x) {
  const double A = diffusion_factor(sys, closure, R, x);
  const double dA = diffusion_factor_dx(sys, closure, R, x);
  const double s = sys.eff_intensity(x);
  const double ds = sys.eff_intensity.derivative_at(x, 1);
  return sys.eff_potential.derivative_at(x, 1) + s * (ds * A + s * dA);
}

namespace {

void require_additive(const NoiseIntensity& intensity, const char* what) {
  if (intensity.kind() != NoiseIntensity::Kind::Additive)
    throw ValidationError(std::string(what) + " requires additive noise");
}

void require_bistable_family(const EffectiveSystem& sys, const ControlParams& ctrl) {
  const auto c = sys.eff_potential.coefficients();
  auto coeff = [&](std::size_t k) { return k < c.size() ? c[k] : 0.0; };
  const double tol = 1e-12;
  const bool ok = c.size() == 5 && std::abs(coeff(4) - 0.25) < tol && std::abs(coeff(3)) < tol &&
                  std::abs(coeff(2) - (-0.5 + 0.5 * ctrl.a)) < tol &&
                  std::abs(coeff(1) + ctrl.a * ctrl.xhat) < tol * std::max(1.0, std::abs(ctrl.a * ctrl.xhat));
  if (!ok)
    throw ValidationError(
        "closed-form extrema need the potential x^4/4 - x^2/2 plus the control well of the given control");
}

ExtremaSet classify_roots(const std::vector<double>& roots, const Interval& domain, auto&& is_maximum) {
  ExtremaSet out;
  for (double r : roots) {
    if (!domain.contains(r)) continue;
    (is_maximum(r) ? out.maxima : out.minima).push_back(r);
  }
  return out;
}

}  // namespace

BistableCubic bistable_cubic(const EffectiveSystem& sys, double a, double R) {
  require_additive(sys.eff_intensity, "bistable_cubic");
  const double sig2 = sys.eff_intensity.sigma() * sys.eff_intensity.sigma();
  const double s = sys.eff_scor;
  if (s * R >= 1.0) throw StationarityError("bistable_cubic: R >= 1/s_cor", R);
  const double d = 1.0 - s * R;
  BistableCubic c;
  c.c1 = (1.0 - a) + 3.0 * sig2 * s / (d * d) * (1.0 + 2.0 * s * (1.0 - a - R) / d);
  c.c3 = 1.0 + 18.0 * sig2 * s * s / (d * d * d);
  return c;
}

ExtremaSet grid_search_extrema(const EffectiveSystem& sys, const Closure& closure, double R,
                               std::size_t n_samples) {
  const Interval dom = sys.domain;
  const double h = dom.width() / static_cast<double>(n_samples - 1);
  auto cond = [&](double x) { return pdf_extrema_condition(sys, closure, R, x); };
  ExtremaSet out;
  out.method = ExtremaSet::Method::GridSearch;
  double x_prev = dom.lo;
  double f_prev = cond(x_prev);
  for (std::size_t i = 1; i < n_samples; ++i) {
    const double x = i + 1 == n_samples ? dom.hi : dom.lo + static_cast<double>(i) * h;
    const double f = cond(x);
    if ((f_prev < 0.0) != (f < 0.0) || f == 0.0) {
      double lo = x_prev, hi = x, flo = f_prev;
      for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(lo)); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = cond(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      const double root = f == 0.0 ? x : 0.5 * (lo + hi);
      // condition negative on the left means the density rises into the root
      (f_prev < 0.0 ? out.maxima : out.minima).push_back(root);
    }
    if (f != 0.0) {
      x_prev = x;
      f_prev = f;
    }
  }
  return out;
}

ExtremaSet bistable_extrema(const EffectiveSystem& sys, double R, const ControlParams& ctrl) {
  require_bistable_family(sys, ctrl);
  const BistableCubic c = bistable_cubic(sys, ctrl.a, R);
  if (std::abs(c.c3) < 1e-12) return grid_search_extrema(sys, ClosureOrder::Two, R);
  const auto roots = real_cubic_roots(c.c3, 0.0, -c.c1, -ctrl.a * ctrl.xhat);
  // the condition is increasing through a maximum of the density
  ExtremaSet out = classify_roots(roots, sys.domain,
                                  [&](double x) { return 3.0 * c.c3 * x * x - c.c1 > 0.0; });
  out.method = ExtremaSet::Method::AnalyticCubic;
  return out;
}

double drift_cancelling_shift(const ScalarModel& model, double a, double tau, double x_a,
                              const Closure& closure, double R) {
  require_additive(model.intensity, "drift cancellation");
  if (!(a > 0.0)) throw ValidationError("drift cancellation needs a positive gain");
  const EffectiveSystem probe = make_effective(model, ControlParams{a, tau, x_a});
  const double sig = probe.eff_intensity(x_a);
  return x_a + (model.potential.derivative_at(x_a, 1) + sig * sig * diffusion_factor_dx(probe, closure, R, x_a)) / a;
}

DriftCancellation cancel_peak_drift(const ScalarModel& model, double a, double tau, double x_a,
                                    ClosureOrder M, const FixedPointConfig& cfg,
                                    const QuadratureGrid& grid) {
  model.validate();
  require_additive(model.intensity, "drift cancellation");
  ControlParams{a, tau, x_a}.validate();
  if (!(model.potential.derivative_at(x_a, 2) > 0.0) ||
      std::abs(model.potential.derivative_at(x_a, 1)) > 1e-8)
    throw ValidationError("drift cancellation target must be a minimum of the potential");

  auto shift = [&](double R) { return drift_cancelling_shift(model, a, tau, x_a, M, R); };
  const EffectiveSystem seed = make_effective(model, ControlParams{a, tau, x_a});
  StationaryPDF pdf = solve_stationary_coupled(
      [&](double R) { return make_effective(model, ControlParams{a, tau, shift(R)}); }, seed, M, cfg, grid);

  const double xhat = shift(pdf.R);
  const double peak = pdf.argmax();
  const bool on_target = std::abs(peak - x_a) <= grid.spacing() * (1.0 + 1e-9);
  RegimeReport report = classify_regime(pdf);
  if (!on_target) {
    std::ostringstream os;
    os << "density maximum at " << peak << " rather than at the target " << x_a;
    report.notes.push_back(os.str());
  }
  return DriftCancellation{xhat, ControlParams{a, tau, xhat}, std::move(pdf), peak, on_target, std::move(report)};
}

RegimeReport classify_density(std::span<const double> x, std::span<const double> density) {
  const std::size_t n = density.size();
  if (n < 5 || x.size() != n) throw ValidationError("classify_density needs >= 5 matching samples");
  const double top = *std::ranges::max_element(density);
  if (!(top > 0.0)) throw ValidationError("classify_density: density is identically zero");
  std::vector<double> f(density.begin(), density.end());
  for (double& v : f) v /= top;

  // Local maxima, endpoints included when they exceed their neighbour.
  std::vector<std::size_t> peaks;
  if (f[0] > f[1]) peaks.push_back(0);
  for (std::size_t i = 1; i + 1 < n; ++i)
    if (f[i] > f[i - 1] && f[i] >= f[i + 1]) peaks.push_back(i);
  if (f[n - 1] > f[n - 2]) peaks.push_back(n - 1);
  std::vector<std::size_t> merged;
  for (std::size_t p : peaks) {
    if (!merged.empty() && p - merged.back() <= kPlateauMerge) {
      if (f[p] > f[merged.back()]) merged.back() = p;
    } else {
      merged.push_back(p);
    }
  }
  if (merged.empty()) merged.push_back(static_cast<std::size_t>(std::ranges::max_element(f) - f.begin()));

  RegimeReport report;
  report.extrema.method = ExtremaSet::Method::GridSearch;
  for (std::size_t k = 0; k < merged.size(); ++k) {
    report.extrema.maxima.push_back(x[merged[k]]);
    if (k + 1 < merged.size()) {
      const auto first = f.begin() + static_cast<std::ptrdiff_t>(merged[k]);
      const auto last = f.begin() + static_cast<std::ptrdiff_t>(merged[k + 1]) + 1;
      report.extrema.minima.push_back(x[static_cast<std::size_t>(std::min_element(first, last) - f.begin())]);
    }
  }
  std::vector<std::size_t> by_height = merged;
  std::ranges::stable_sort(by_height, [&](std::size_t i, std::size_t j) { return f[i] > f[j]; });
  for (std::size_t i : by_height) {
    report.peak_locations.push_back(x[i]);
    report.peak_heights.push_back(density[i]);
  }

  std::vector<double> d2(n - 2);
  double d2max = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    d2[i - 1] = f[i + 1] - 2.0 * f[i] + f[i - 1];
    d2max = std::max(d2max, std::abs(d2[i - 1]));
  }
  int changes = 0;
  int last_sign = 0;
  for (double v : d2) {
    if (std::abs(v) < kInflectionDeadBand * d2max) continue;
    const int sign = v > 0.0 ? 1 : -1;
    if (last_sign != 0 && sign != last_sign) ++changes;
    last_sign = sign;
  }
  if (changes > kMaxInflectionSignChanges) {
    std::ostringstream os;
    os << changes << " curvature sign changes exceed " << kMaxInflectionSignChanges
       << "; refine the grid";
    throw ResolutionError(os.str());
  }
  report.inflection_count = changes;

  if (merged.size() >= 2) {
    report.label = RegimeLabel::Bimodal;
  } else if (changes >= 4) {
    report.label = RegimeLabel::UnimodalInflated;
  } else {
    report.label = RegimeLabel::UnimodalClean;
    if (changes != 2) report.notes.push_back("unimodal density with " + std::to_string(changes) + " inflection points");
  }
  return report;
}

RegimeReport classify_regime(const StationaryPDF& pdf) { return classify_density(pdf.grid.nodes(), pdf.density); }

double peak_coordinate(const RegimeReport& report, const ControlParams& ctrl) {
  const double top = report.peak_locations.front();
  if (report.label == RegimeLabel::Bimodal && ctrl.a == 0.0) return std::abs(top);
  return top;
}

RegimeRow make_regime_row(const ControlParams& ctrl, double sigma, double s_cor, const StationaryPDF& pdf,
                          const RegimeReport& report) {
  RegimeRow row;
  row.ctrl = ctrl;
  row.sigma = sigma;
  row.s_cor = s_cor;
  row.R = pdf.R;
  row.peak_x = peak_coordinate(report, ctrl);
  row.n_maxima = static_cast<int>(report.extrema.maxima.size());
  row.n_inflections = report.inflection_count;
  row.label = report.label;
  return row;
}

std::vector<RegimeRow> peak_drift_map(const ScalarModel& model, std::span<const ControlParams> ctrls,
                                      std::span<const std::pair<double, double>> noises, ClosureOrder M,
                                      const FixedPointConfig& cfg, std::size_t grid_nodes, unsigned jobs) {
  const QuadratureGrid grid(model.domain, grid_nodes);
  std::vector<RegimeRow> rows(ctrls.size() * noises.size());
  parallel_for(rows.size(), jobs, [&](std::size_t idx) {
    const ControlParams& ctrl = ctrls[idx / noises.size()];
    const auto [sigma, s_cor] = noises[idx % noises.size()];
    RegimeRow& row = rows[idx];
    row.ctrl = ctrl;
    row.sigma = sigma;
    row.s_cor = s_cor;
    try {
      const ScalarModel m = model.with_noise(sigma, s_cor);
      m.validate();
      const StationaryPDF pdf = solve_stationary(make_effective(m, ctrl), M, cfg, grid);
      row = make_regime_row(ctrl, sigma, s_cor, pdf, classify_regime(pdf));
    } catch (const Error& e) {
      row.error = e.what();
    }
  });
  return rows;
}

void write_regime_csv(std::span<const RegimeRow> rows, std::ostream& out) {
  const auto old_precision = out.precision(17);
  out << "a,tau,xhat,sigma,s_cor,R,peak_x,n_maxima,n_inflections,label\n";
  for (const RegimeRow& r : rows) {
    out << r.ctrl.a << "," << r.ctrl.tau << "," << r.ctrl.xhat << "," << r.sigma << "," << r.s_cor << ",";
    if (r.label) {
      out << r.R << "," << r.peak_x << "," << r.n_maxima << "," << r.n_inflections << "," << to_string(*r.label);
    } else {
      out << "nan,nan,0,0,failed";
    }
    out << "\n";
  }
  out.precision(old_precision);
}

}  // namespace noisectl
