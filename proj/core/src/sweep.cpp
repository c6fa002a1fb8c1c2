#include "noisectl/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "noisectl/error.hpp"
#include "noisectl/parallel.hpp"
#include "noisectl/version.hpp"

namespace noisectl {

namespace {

int rank(RegimeLabel label) {
  switch (label) {
    case RegimeLabel::Bimodal: return 0;
    case RegimeLabel::UnimodalInflated: return 1;
    case RegimeLabel::UnimodalClean: return 2;
  }
  return 0;
}

void require_sorted(const std::vector<double>& v, const char* name) {
  if (v.empty()) throw ValidationError(std::string("sweep: ") + name + " is empty");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) throw ValidationError(std::string("sweep: ") + name + " contains a non-finite value");
    if (i > 0 && !(v[i] > v[i - 1])) throw ValidationError(std::string("sweep: ") + name + " must be strictly ascending");
  }
}

void put_number(std::ostream& out, double v) {
  if (std::isfinite(v))
    out << v;
  else
    out << "nan";
}

void put_optional(std::ostream& out, const std::optional<double>& v) {
  if (v)
    out << *v;
  else
    out << "nan";
}

}  // namespace

void SweepSpec::validate() const {
  require_sorted(a_values, "a_values");
  require_sorted(tau_values, "tau_values");
  require_sorted(scor_values, "scor_values");
  if (a_values.front() < 0.0) throw ValidationError("sweep: control gains must be non-negative");
  if (tau_values.front() < 0.0) throw ValidationError("sweep: delays must be non-negative");
  if (!(scor_values.front() > 0.0)) throw ValidationError("sweep: correlation times must be positive");
  if (!(sigma > 0.0)) throw ValidationError("sweep: sigma must be positive");
  if (grid_nodes < 3 || grid_nodes % 2 == 0) throw ValidationError("sweep: grid_nodes must be odd and >= 3");
  solver.validate();
  model.with_noise(sigma, scor_values.front()).validate();
  if (drift_cancel && !model.domain.contains(x_a)) throw ValidationError("sweep: x_a lies outside the domain");
}

SweepSpec SweepSpec::benchmark_grid() {
  SweepSpec spec;
  spec.a_values = linspace_step(0.0, 4.0, 0.1);
  spec.tau_values = linspace_step(0.05, 0.45, 0.05);
  spec.scor_values = linspace_step(0.1, 0.5, 0.05);
  spec.sigma = 1.0;
  return spec;
}

std::vector<double> linspace_step(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) throw ValidationError("linspace_step: need step > 0 and hi >= lo");
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double v = lo + static_cast<double>(k) * step;
    // Snap to 12 significant decimals to strip accumulation noise.
    out[k] = std::round(v * 1e12) / 1e12;
  }
  return out;
}

std::string to_string(CellStatus status) {
  switch (status) {
    case CellStatus::Ok: return "ok";
    case CellStatus::Skipped: return "skipped";
    case CellStatus::Failed: return "failed";
  }
  return "unknown";
}

const RegimeCell& RegimeSurface::at(std::size_t tau_idx, std::size_t scor_idx, std::size_t a_idx) const {
  const std::size_t na = spec.a_values.size(), ns = spec.scor_values.size();
  return cells.at((tau_idx * ns + scor_idx) * na + a_idx);
}

RegimeCell evaluate_cell(const SweepSpec& spec, double a, double tau, double s_cor) {
  RegimeCell cell;
  cell.a = a;
  cell.tau = tau;
  cell.s_cor = s_cor;
  cell.xhat = spec.drift_cancel ? spec.x_a : spec.xhat;
  if (a * tau >= 1.0) {
    std::ostringstream os;
    os << "a*tau = " << a * tau << " >= 1";
    cell.status = CellStatus::Skipped;
    cell.reason = os.str();
    return cell;
  }
  try {
    const ScalarModel model = spec.model.with_noise(spec.sigma, s_cor);
    const QuadratureGrid grid(model.domain, spec.grid_nodes);
    std::optional<StationaryPDF> pdf;
    RegimeReport report;
    if (spec.drift_cancel && a > 0.0) {
      DriftCancellation dc = cancel_peak_drift(model, a, tau, spec.x_a, spec.M, spec.solver, grid);
      cell.xhat = dc.xhat;
      report = std::move(dc.report);
      pdf.emplace(std::move(dc.pdf));
    } else {
      const ControlParams ctrl{a, tau, cell.xhat};
      pdf.emplace(solve_stationary(make_effective(model, ctrl), spec.M, spec.solver, grid));
      report = classify_regime(*pdf);
    }
    cell.label = report.label;
    cell.R = pdf->R;
    cell.peak_x = peak_coordinate(report, ControlParams{a, tau, cell.xhat});
    cell.n_inflections = report.inflection_count;
  } catch (const Error& e) {
    cell.status = CellStatus::Failed;
    cell.reason = e.what();
    cell.label.reset();
  }
  return cell;
}

RegimeSurface run_sweep(const SweepSpec& spec) {
  spec.validate();
  const auto start = std::chrono::steady_clock::now();
  RegimeSurface surface;
  surface.spec = spec;
  const std::size_t na = spec.a_values.size(), nt = spec.tau_values.size(), ns = spec.scor_values.size();
  surface.cells.resize(na * nt * ns);
  parallel_for(surface.cells.size(), spec.jobs, [&](std::size_t idx) {
    const std::size_t ai = idx % na;
    const std::size_t si = (idx / na) % ns;
    const std::size_t ti = idx / (na * ns);
    surface.cells[idx] = evaluate_cell(spec, spec.a_values[ai], spec.tau_values[ti], spec.scor_values[si]);
  });

  for (const RegimeCell& c : surface.cells) {
    if (c.status == CellStatus::Ok) ++surface.n_ok;
    if (c.status == CellStatus::Skipped) ++surface.n_skipped;
    if (c.status == CellStatus::Failed) ++surface.n_failed;
  }

  for (std::size_t ti = 0; ti < nt; ++ti) {
    for (std::size_t si = 0; si < ns; ++si) {
      RegimeBoundary b{spec.tau_values[ti], spec.scor_values[si], std::nullopt, std::nullopt};
      std::optional<double> clean_at;
      for (std::size_t ai = 0; ai < na; ++ai) {
        const RegimeCell& c = surface.at(ti, si, ai);
        if (!c.label) continue;
        const int r = rank(*c.label);
        if (r >= 1 && !b.a_unimodal) b.a_unimodal = c.a;
        if (r == 2 && !b.a_clean) b.a_clean = c.a;
        if (r == 2 && !clean_at) clean_at = c.a;
        if (r == 0 && clean_at) {
          std::ostringstream os;
          os << "tau=" << b.tau << ", s_cor=" << b.s_cor << ": bimodal at a=" << c.a
             << " after a clean unimodal density at a=" << *clean_at;
          surface.findings.push_back(os.str());
          clean_at.reset();
        }
      }
      surface.boundaries.push_back(b);
    }
  }
  surface.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return surface;
}

double refine_boundary(const SweepSpec& spec, double tau, double s_cor, double a_lo, double a_hi,
                       RegimeLabel target, double tol) {
  if (!(a_hi > a_lo) || !(tol > 0.0)) throw ValidationError("refine_boundary: need a_lo < a_hi and tol > 0");
  auto reached = [&](double a) {
    const RegimeCell c = evaluate_cell(spec, a, tau, s_cor);
    if (c.status != CellStatus::Ok) {
      std::ostringstream os;
      os << "refine_boundary: cell a=" << a << " is " << to_string(c.status) << " (" << c.reason << ")";
      throw ConvergenceError(os.str());
    }
    return rank(*c.label) >= rank(target);
  };
  if (reached(a_lo) || !reached(a_hi))
    throw ValidationError("refine_boundary: bracket does not straddle the " + to_string(target) + " transition");
  while (a_hi - a_lo > tol) {
    const double mid = 0.5 * (a_lo + a_hi);
    (reached(mid) ? a_hi : a_lo) = mid;
  }
  return a_hi;
}

void write_surface_csv(const RegimeSurface& surface, std::ostream& out) {
  const auto old_precision = out.precision(17);
  out << "a,tau,s_cor,label,R,peak_x,n_inflections\n";
  for (const RegimeCell& c : surface.cells) {
    out << c.a << "," << c.tau << "," << c.s_cor << ",";
    if (c.label) {
      out << to_string(*c.label) << ",";
      put_number(out, c.R);
      out << ",";
      put_number(out, c.peak_x);
      out << "," << c.n_inflections << "\n";
    } else {
      out << to_string(c.status) << ",nan,nan,0\n";
    }
  }
  out.precision(old_precision);
}

void write_boundary_csv(const RegimeSurface& surface, std::ostream& out) {
  const auto old_precision = out.precision(17);
  out << "tau,s_cor,a_unimodal,a_clean\n";
  for (const RegimeBoundary& b : surface.boundaries) {
    out << b.tau << "," << b.s_cor << ",";
    put_optional(out, b.a_unimodal);
    out << ",";
    put_optional(out, b.a_clean);
    out << "\n";
  }
  out.precision(old_precision);
}

std::filesystem::path export_surface(const RegimeSurface& surface, const std::filesystem::path& path) {
  auto write = [](const std::filesystem::path& p, auto&& body) {
    std::ofstream out(p);
    if (!out) throw IoError("cannot write " + p.string());
    body(out);
    if (!out) throw IoError("write failed for " + p.string());
  };
  std::filesystem::path boundary_path = path;
  boundary_path.replace_filename(path.stem().string() + "_boundaries.csv");
  write(path, [&](std::ostream& o) { write_surface_csv(surface, o); });
  write(boundary_path, [&](std::ostream& o) { write_boundary_csv(surface, o); });
  return boundary_path;
}

std::string manifest_json(const RegimeSurface& surface) {
  using nlohmann::json;
  const SweepSpec& s = surface.spec;
  json spec = {
      {"model", s.model_name},
      {"potential_coeffs", std::vector<double>(s.model.potential.coefficients().begin(), s.model.potential.coefficients().end())},
      {"noise_kind", to_string(s.model.intensity.kind())},
      {"domain", {s.model.domain.lo, s.model.domain.hi}},
      {"a_values", s.a_values},
      {"tau_values", s.tau_values},
      {"scor_values", s.scor_values},
      {"sigma", s.sigma},
      {"M", to_int(s.M)},
      {"drift_cancel", s.drift_cancel},
      {"x_a", s.x_a},
      {"xhat", s.xhat},
      {"grid_nodes", s.grid_nodes},
      {"tol", s.solver.tol},
      {"max_iter", s.solver.max_iter},
      {"relaxation", s.solver.relaxation},
      {"auto_damp", s.solver.auto_damp},
      {"jobs", s.jobs},
  };
  json failures = json::array();
  for (const RegimeCell& c : surface.cells)
    if (c.status == CellStatus::Failed)
      failures.push_back({{"a", c.a}, {"tau", c.tau}, {"s_cor", c.s_cor}, {"reason", c.reason}});
  const double per_cell = surface.n_ok + surface.n_failed > 0
                              ? surface.elapsed_seconds / static_cast<double>(surface.n_ok + surface.n_failed)
                              : 0.0;
  json doc = {
      {"tool", "noisectl"},
      {"version", kVersion},
      {"sweep", spec},
      {"cells", {{"total", surface.cells.size()},
                 {"ok", surface.n_ok},
                 {"skipped", surface.n_skipped},
                 {"failed", surface.n_failed}}},
      {"failures", failures},
      {"findings", surface.findings},
      {"timings", {{"elapsed_seconds", surface.elapsed_seconds}, {"seconds_per_solved_cell", per_cell}}},
  };
  return doc.dump(2);
}

void write_manifest(const RegimeSurface& surface, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << manifest_json(surface) << "\n";
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace noisectl
