#include "commands.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "noisectl/analysis.hpp"
#include "noisectl/config.hpp"
#include "noisectl/error.hpp"
#include "noisectl/mc.hpp"
#include "noisectl/sweep.hpp"
#include "noisectl/version.hpp"

namespace noisectl::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct CommonOptions {
  std::string model = "bistable";
  std::string config;
  std::optional<double> a, tau, xhat, sigma, scor;
  std::string out = "noisectl-out";
  std::uint64_t seed = 1;
  unsigned jobs = 1;
  std::size_t grid = QuadratureGrid::kDefaultNodes;
  double tol = 1e-4;
  int max_iter = 100;
};

struct PdfOptions {
  std::vector<int> closures{0, 2};
};

struct McOptions {
  std::string form = "sdde";
  std::optional<std::size_t> paths;
  std::optional<double> dt, t_end, burn_in, x0;
  std::size_t bins = 200;
  std::size_t stride = 1;
  std::string integrator = "heun";
  std::string analytic;
};

struct CancelOptions {
  double x_a = 1.0;
  int M = 2;
};

struct SweepOptions {
  std::string a_range = "0:4:0.1";
  std::string tau_range = "0.05:0.45:0.05";
  std::string scor_range = "0.1:0.5:0.05";
  bool drift_cancel = false;
  double x_a = 1.0;
  int M = 2;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--model", o.model, "Preset model: bistable | laser")->capture_default_str();
  cmd->add_option("--config", o.config, "YAML model file; keys override the preset");
  cmd->add_option("--a", o.a, "Control gain a");
  cmd->add_option("--tau", o.tau, "Control delay tau");
  cmd->add_option("--xhat", o.xhat, "Control target xhat");
  cmd->add_option("--sigma", o.sigma, "Noise intensity sigma");
  cmd->add_option("--scor", o.scor, "Noise correlation time s_cor");
  cmd->add_option("--out", o.out, "Output directory")->capture_default_str();
  cmd->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  cmd->add_option("--jobs", o.jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--grid", o.grid, "Quadrature nodes (odd)")->capture_default_str();
  cmd->add_option("--tol", o.tol, "Fixed-point tolerance")->capture_default_str();
  cmd->add_option("--max-iter", o.max_iter, "Fixed-point iteration cap")->capture_default_str();
}

ModelDefinition resolve_model(const CommonOptions& o) {
  ModelDefinition def = preset_definition(o.model);
  if (!o.config.empty()) def = load_model_definition(o.config, def);
  const double sigma = o.sigma.value_or(def.model.intensity.sigma());
  const double scor = o.scor.value_or(def.model.s_cor);
  def.model = def.model.with_noise(sigma, scor);
  if (o.a) def.control.a = *o.a;
  if (o.tau) def.control.tau = *o.tau;
  if (o.xhat) def.control.xhat = *o.xhat;
  def.control.validate();
  return def;
}

FixedPointConfig solver_config(const CommonOptions& o) {
  FixedPointConfig cfg;
  cfg.tol = o.tol;
  cfg.max_iter = o.max_iter;
  cfg.validate();
  return cfg;
}

fs::path prepare_out(const CommonOptions& o) {
  const fs::path dir(o.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir.string());
  return dir;
}

template <typename Body>
void write_file(const fs::path& path, Body&& body) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  body(out);
  if (!out) throw IoError("write failed for " + path.string());
}

void write_config_echo(const fs::path& dir, const ModelDefinition& def, const ordered_json& run) {
  write_file(dir / "config.yaml", [&](std::ostream& out) {
    out << to_config_text(def) << "run:\n";
    for (const auto& [key, value] : run.items()) out << "  " << key << ": " << value.dump() << "\n";
  });
}

void write_manifest(const fs::path& dir, const std::string& command, const std::vector<std::string>& args,
                    const ordered_json& run, const ordered_json& outputs, const std::vector<std::string>& warnings,
                    double seconds) {
  ordered_json doc;
  doc["tool"] = "noisectl";
  doc["version"] = kVersion;
  doc["command"] = command;
  doc["argv"] = args;
  doc["run"] = run;
  doc["outputs"] = outputs;
  doc["warnings"] = warnings;
  doc["timings"] = {{"elapsed_seconds", seconds}};
  write_file(dir / "manifest.json", [&](std::ostream& out) { out << doc.dump(2) << "\n"; });
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void write_density(const fs::path& path, const StationaryPDF& pdf) {
  write_file(path, [&](std::ostream& out) { write_csv(pdf, out); });
}

std::vector<double> parse_values(const std::string& text, const char* name) {
  try {
    if (text.find(':') != std::string::npos) {
      std::vector<double> parts;
      std::stringstream ss(text);
      for (std::string item; std::getline(ss, item, ':');) parts.push_back(std::stod(item));
      if (parts.size() != 3) throw ValidationError("");
      return linspace_step(parts[0], parts[1], parts[2]);
    }
    std::vector<double> values;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) values.push_back(std::stod(item));
    if (values.empty()) throw ValidationError("");
    return values;
  } catch (const std::exception&) {
    throw ValidationError(std::string("--") + name + " expects lo:hi:step or a comma list, got '" + text + "'");
  }
}

ordered_json common_run(const CommonOptions& o) {
  return ordered_json{{"model", o.model}, {"config", o.config}, {"out", o.out},   {"seed", o.seed},
                      {"jobs", o.jobs},   {"grid", o.grid},     {"tol", o.tol}, {"max_iter", o.max_iter}};
}

void cmd_pdf(const CommonOptions& o, const PdfOptions& p, const std::vector<std::string>& args, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const ModelDefinition def = resolve_model(o);
  def.model.validate();
  const FixedPointConfig cfg = solver_config(o);
  const QuadratureGrid grid(def.model.domain, o.grid);
  const EffectiveSystem sys = make_effective(def.model, def.control);
  const fs::path dir = prepare_out(o);

  std::vector<std::pair<std::string, StationaryPDF>> solved;
  for (int m : p.closures) solved.emplace_back("M" + std::to_string(m), solve_stationary(sys, closure_from_int(m), cfg, grid));
  solved.emplace_back("white", solve_white_noise(sys, grid));

  ordered_json outputs = ordered_json::array();
  std::vector<std::string> warnings;
  if (def.model.potential.derivative_at(def.control.xhat, 2) > 0.0)
    warnings = timescale_warnings(def.model, def.control, def.control.xhat);
  std::ostringstream report;
  report.precision(17);
  report << "closure,R,iterations_used,n_maxima,n_inflections,label,peak_x\n";
  for (const auto& [tag, pdf] : solved) {
    const std::string name = "pdf_" + tag + ".csv";
    write_density(dir / name, pdf);
    outputs.push_back(name);
    const RegimeReport r = classify_regime(pdf);
    report << to_string(pdf.closure) << "," << pdf.R << "," << pdf.iterations_used << "," << r.extrema.maxima.size()
           << "," << r.inflection_count << "," << to_string(r.label) << "," << peak_coordinate(r, def.control) << "\n";
    for (const auto& w : pdf.warnings) warnings.push_back(tag + ": " + w);
    out << tag << ": R=" << pdf.R << " iterations=" << pdf.iterations_used << " regime=" << to_string(r.label)
        << "\n";
  }
  write_file(dir / "report.csv", [&](std::ostream& f) { f << report.str(); });
  outputs.push_back("report.csv");

  ordered_json run = common_run(o);
  run["command"] = "pdf";
  run["closures"] = p.closures;
  write_config_echo(dir, def, run);
  write_manifest(dir, "pdf", args, run, outputs, warnings, seconds_since(t0));
}

void cmd_mc(const CommonOptions& o, const McOptions& m, const std::vector<std::string>& args, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  ModelDefinition def = resolve_model(o);
  def.model.validate(/*require_nonvanishing=*/false);
  MCConfig cfg = o.model == "laser" ? MCConfig::laser_defaults() : MCConfig::bistable_defaults();
  if (m.paths) cfg.n_paths = *m.paths;
  if (m.dt) cfg.dt = *m.dt;
  if (m.t_end) cfg.t_end = *m.t_end;
  if (m.burn_in) cfg.burn_in = *m.burn_in;
  cfg.x0 = m.x0;
  cfg.seed = o.seed;
  cfg.jobs = o.jobs;
  cfg.histogram_bins = m.bins;
  cfg.sample_stride = m.stride;
  cfg.integrator = parse_integrator(m.integrator);

  EmpiricalPDF pdf;
  if (m.form == "sdde") {
    pdf = simulate_sdde(def.model, def.control, cfg);
  } else if (m.form == "rescaled") {
    pdf = simulate_rescaled(def.model, def.control, cfg);
  } else if (m.form == "uncontrolled") {
    def.control.a = 0.0;
    def.control.tau = 0.0;
    pdf = simulate_sdde(def.model, def.control, cfg);
  } else {
    throw ValidationError("--form must be sdde | rescaled | uncontrolled, got '" + m.form + "'");
  }

  const fs::path dir = prepare_out(o);
  const std::string name = "mc_" + m.form + ".csv";
  write_file(dir / name, [&](std::ostream& f) { write_csv(pdf, f); });
  ordered_json outputs = ordered_json::array({name});
  std::vector<std::string> warnings = pdf.warnings;

  ordered_json run = common_run(o);
  run["command"] = "mc";
  run["form"] = m.form;
  run["paths"] = cfg.n_paths;
  run["dt"] = cfg.dt;
  run["t_end"] = cfg.t_end;
  run["burn_in"] = cfg.burn_in;
  run["bins"] = cfg.histogram_bins;
  run["stride"] = cfg.sample_stride;
  run["integrator"] = to_string(cfg.integrator);
  if (m.x0) run["x0"] = *m.x0;
  out << m.form << ": " << pdf.n_samples << " samples, " << pdf.aborted_paths << " aborted paths\n";
  if (!m.analytic.empty()) {
    const DensityTable table = read_density_csv(m.analytic);
    const double d = l1_distance(pdf, table, &warnings);
    run["analytic"] = m.analytic;
    write_file(dir / "l1.csv", [&](std::ostream& f) {
      f.precision(17);
      f << "analytic,l1\n" << m.analytic << "," << d << "\n";
    });
    outputs.push_back("l1.csv");
    out << "L1 distance to " << m.analytic << ": " << d << "\n";
  }
  write_config_echo(dir, def, run);
  write_manifest(dir, "mc", args, run, outputs, warnings, seconds_since(t0));
}

void cmd_cancel_drift(const CommonOptions& o, const CancelOptions& c, const std::vector<std::string>& args,
                      std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  ModelDefinition def = resolve_model(o);
  const FixedPointConfig cfg = solver_config(o);
  const QuadratureGrid grid(def.model.domain, o.grid);
  const DriftCancellation dc =
      cancel_peak_drift(def.model, def.control.a, def.control.tau, c.x_a, closure_from_int(c.M), cfg, grid);
  def.control = dc.control;

  const fs::path dir = prepare_out(o);
  write_density(dir / "pdf_cancel.csv", dc.pdf);
  write_file(dir / "cancel.csv", [&](std::ostream& f) {
    f.precision(17);
    f << "x_a,xhat,R,argmax,peak_at_target,iterations_used,label\n"
      << c.x_a << "," << dc.xhat << "," << dc.pdf.R << "," << dc.argmax << "," << (dc.peak_at_target ? 1 : 0) << ","
      << dc.pdf.iterations_used << "," << to_string(dc.report.label) << "\n";
  });
  std::vector<std::string> warnings = dc.pdf.warnings;
  warnings.insert(warnings.end(), dc.report.notes.begin(), dc.report.notes.end());

  ordered_json run = common_run(o);
  run["command"] = "cancel-drift";
  run["x_a"] = c.x_a;
  run["M"] = c.M;
  write_config_echo(dir, def, run);
  write_manifest(dir, "cancel-drift", args, run, ordered_json::array({"pdf_cancel.csv", "cancel.csv"}), warnings,
                 seconds_since(t0));
  out << "xhat=" << dc.xhat << " R=" << dc.pdf.R << " argmax=" << dc.argmax
      << (dc.peak_at_target ? " (on target)" : " (off target)") << "\n";
}

void cmd_sweep(const CommonOptions& o, const SweepOptions& s, std::ostream& out) {
  const ModelDefinition def = resolve_model(o);
  SweepSpec spec;
  spec.a_values = parse_values(s.a_range, "a-range");
  spec.tau_values = parse_values(s.tau_range, "tau-range");
  spec.scor_values = parse_values(s.scor_range, "scor-range");
  spec.sigma = def.model.intensity.sigma();
  spec.M = closure_from_int(s.M);
  spec.drift_cancel = s.drift_cancel;
  spec.x_a = s.x_a;
  spec.xhat = def.control.xhat;
  spec.model_name = def.name;
  spec.model = def.model;
  spec.grid_nodes = o.grid;
  spec.solver = solver_config(o);
  spec.jobs = o.jobs;

  const RegimeSurface surface = run_sweep(spec);
  const fs::path dir = prepare_out(o);
  export_surface(surface, dir / "surface.csv");
  noisectl::write_manifest(surface, dir / "manifest.json");

  ordered_json run = common_run(o);
  run["command"] = "sweep";
  run["a_range"] = s.a_range;
  run["tau_range"] = s.tau_range;
  run["scor_range"] = s.scor_range;
  run["drift_cancel"] = s.drift_cancel;
  run["x_a"] = s.x_a;
  run["M"] = s.M;
  write_config_echo(dir, def, run);
  out << surface.cells.size() << " cells: " << surface.n_ok << " ok, " << surface.n_skipped << " skipped, "
      << surface.n_failed << " failed\n";
  for (const auto& f : surface.findings) out << "finding: " << f << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"noisectl: stationary densities of colored-noise systems under delayed feedback"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  CommonOptions common;
  PdfOptions pdf_opts;
  McOptions mc_opts;
  CancelOptions cancel_opts;
  SweepOptions sweep_opts;

  auto* pdf = app.add_subcommand("pdf", "Stationary densities for closures M=0, M=2 and white noise");
  add_common(pdf, common);
  pdf->add_option("--M", pdf_opts.closures, "Closure orders to solve")->capture_default_str();

  auto* mc = app.add_subcommand("mc", "Monte Carlo histogram of the controlled system");
  add_common(mc, common);
  mc->add_option("--form", mc_opts.form, "sdde | rescaled | uncontrolled")->capture_default_str();
  mc->add_option("--paths", mc_opts.paths, "Number of realizations");
  mc->add_option("--dt", mc_opts.dt, "Time step");
  mc->add_option("--t-end", mc_opts.t_end, "Simulated time per path");
  mc->add_option("--burn-in", mc_opts.burn_in, "Discarded initial time");
  mc->add_option("--x0", mc_opts.x0, "Initial state and constant history");
  mc->add_option("--bins", mc_opts.bins, "Histogram bins")->capture_default_str();
  mc->add_option("--stride", mc_opts.stride, "Keep every n-th step after burn-in")->capture_default_str();
  mc->add_option("--integrator", mc_opts.integrator, "heun | euler")->capture_default_str();
  mc->add_option("--analytic", mc_opts.analytic, "Density CSV to compare against (L1)");

  auto* cancel = app.add_subcommand("cancel-drift", "Shift xhat so the controlled density peaks at x_a");
  add_common(cancel, common);
  cancel->add_option("--x-a", cancel_opts.x_a, "Target peak location")->capture_default_str();
  cancel->add_option("--M", cancel_opts.M, "Closure order")->capture_default_str();

  auto* sweep = app.add_subcommand("sweep", "Regime surface over (a, tau, s_cor)");
  add_common(sweep, common);
  sweep->add_option("--a-range", sweep_opts.a_range, "lo:hi:step or comma list")->capture_default_str();
  sweep->add_option("--tau-range", sweep_opts.tau_range, "lo:hi:step or comma list")->capture_default_str();
  sweep->add_option("--scor-range", sweep_opts.scor_range, "lo:hi:step or comma list")->capture_default_str();
  sweep->add_flag("--drift-cancel", sweep_opts.drift_cancel, "Re-centre each controlled cell at x_a");
  sweep->add_option("--x-a", sweep_opts.x_a, "Target peak for drift cancellation")->capture_default_str();
  sweep->add_option("--M", sweep_opts.M, "Closure order")->capture_default_str();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (*pdf) cmd_pdf(common, pdf_opts, args, out);
    if (*mc) cmd_mc(common, mc_opts, args, out);
    if (*cancel) cmd_cancel_drift(common, cancel_opts, args, out);
    if (*sweep) cmd_sweep(common, sweep_opts, out);
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const ConvergenceError& e) {
    err << "convergence error: " << e.what() << "\n";
    return kConvergence;
  } catch (const ResolutionError& e) {
    err << "resolution error: " << e.what() << "\n";
    return kConvergence;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kOk;
}

}  // namespace noisectl::cli
