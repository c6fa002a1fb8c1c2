#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "commands.hpp"
#include "noisectl/config.hpp"

namespace fs = std::filesystem;
using noisectl::cli::run;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "noisectl");
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("noisectl_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("pdf writes three densities, a report and the config echo") {
  const auto dir = scratch("pdf");
  const Result r = invoke({"pdf", "--grid", "801", "--out", dir.string()});
  REQUIRE(r.code == 0);
  for (const char* f : {"pdf_M0.csv", "pdf_M2.csv", "pdf_white.csv", "report.csv", "config.yaml", "manifest.json"})
    CHECK(fs::exists(dir / f));
  CHECK(slurp(dir / "report.csv").find("bimodal") != std::string::npos);
  const auto echo = noisectl::load_model_definition(dir / "config.yaml");
  CHECK(echo.model == noisectl::preset_definition("bistable").model);
  const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(manifest["command"] == "pdf");
  const std::string first = slurp(dir / "pdf_M2.csv");
  REQUIRE(invoke({"pdf", "--grid", "801", "--out", dir.string()}).code == 0);
  CHECK(slurp(dir / "pdf_M2.csv") == first);
}

TEST_CASE("laser pdf with control reports an inflated tail") {
  const auto dir = scratch("laser");
  const Result r = invoke({"pdf", "--model", "laser", "--a", "4", "--tau", "0.05", "--xhat", "42", "--M", "2",
                           "--out", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(slurp(dir / "report.csv").find("2,") != std::string::npos);
  CHECK(r.out.find("M2: ") != std::string::npos);
  CHECK(r.out.find("unimodal-inflated") != std::string::npos);
}

TEST_CASE("mc is reproducible and compares against an analytic density") {
  const auto dir = scratch("mc");
  REQUIRE(invoke({"pdf", "--a", "1", "--tau", "0.1", "--M", "2", "--out", dir.string()}).code == 0);
  const std::vector<std::string> args{"mc", "--a", "1", "--tau", "0.1", "--paths", "16", "--t-end", "6",
                                      "--burn-in", "2", "--seed", "9", "--analytic", (dir / "pdf_M2.csv").string(),
                                      "--out", dir.string()};
  REQUIRE(invoke(args).code == 0);
  const std::string first = slurp(dir / "mc_sdde.csv");
  auto jobs = args;
  jobs.insert(jobs.end(), {"--jobs", "2"});
  REQUIRE(invoke(jobs).code == 0);
  CHECK(slurp(dir / "mc_sdde.csv") == first);
  CHECK(fs::exists(dir / "l1.csv"));
}

TEST_CASE("cancel-drift reports the shift") {
  const auto dir = scratch("cancel");
  const Result r = invoke({"cancel-drift", "--a", "1", "--tau", "0.1", "--sigma", "0.8", "--scor", "0.2", "--out",
                           dir.string()});
  REQUIRE(r.code == 0);
  const std::string csv = slurp(dir / "cancel.csv");
  CHECK(csv.find("0.83") != std::string::npos);
  CHECK(fs::exists(dir / "pdf_cancel.csv"));
}

TEST_CASE("sweep on a single cell") {
  const auto dir = scratch("sweep");
  const Result r = invoke({"sweep", "--sigma", "1", "--a-range", "0.5", "--tau-range", "0.1", "--scor-range", "0.2",
                           "--out", dir.string()});
  REQUIRE(r.code == 0);
  const std::string surface = slurp(dir / "surface.csv");
  CHECK(std::count(surface.begin(), surface.end(), '\n') == 2);
  CHECK(fs::exists(dir / "surface_boundaries.csv"));
  CHECK(fs::exists(dir / "manifest.json"));
  CHECK(fs::exists(dir / "config.yaml"));
}

TEST_CASE("exit codes") {
  CHECK(invoke({}).code == noisectl::cli::kValidation);
  CHECK(invoke({"pdf", "--a", "5", "--tau", "0.3", "--out", scratch("bad").string()}).code == noisectl::cli::kValidation);
  CHECK(invoke({"pdf", "--model", "nope"}).code == noisectl::cli::kValidation);
  CHECK(invoke({"pdf", "--config", "/nonexistent.yaml"}).code == noisectl::cli::kIo);
  CHECK(invoke({"pdf", "--max-iter", "1", "--tol", "1e-14", "--grid", "401", "--out", scratch("conv").string()}).code ==
        noisectl::cli::kConvergence);
  CHECK(invoke({"mc", "--form", "spiral", "--out", scratch("form").string()}).code == noisectl::cli::kValidation);
  CHECK(invoke({"--help"}).code == noisectl::cli::kOk);
}

}
