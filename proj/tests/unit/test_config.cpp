#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "noisectl/config.hpp"
#include "noisectl/error.hpp"

using namespace noisectl;

TEST_SUITE("config") {

TEST_CASE("presets round-trip through the text form") {
  for (const char* name : {"bistable", "laser"}) {
    const ModelDefinition def = preset_definition(name);
    const ModelDefinition back = parse_model_definition(to_config_text(def));
    CHECK(back.name == def.name);
    CHECK(back.model == def.model);
    CHECK(back.control == def.control);
  }
}

TEST_CASE("bundled preset files match the built-in presets") {
  for (const char* name : {"bistable", "laser"}) {
    const auto path = std::filesystem::path(NOISECTL_PRESET_DIR) / (std::string(name) + ".yaml");
    const ModelDefinition file = load_model_definition(path);
    const ModelDefinition builtin = preset_definition(name);
    CHECK(file.model == builtin.model);
    CHECK(file.control == builtin.control);
  }
}

TEST_CASE("flat dotted keys override defaults") {
  const ModelDefinition def = parse_model_definition(
      "noise.sigma: 0.8\nnoise.s_cor: 0.2\ncontrol.a: 1\ncontrol.tau: 0.1\n", preset_definition("bistable"));
  CHECK(def.model.intensity.sigma() == 0.8);
  CHECK(def.model.s_cor == 0.2);
  CHECK(def.control.a == 1.0);
  CHECK(def.control.tau == 0.1);
  CHECK(def.model.potential == preset_definition("bistable").model.potential);
}

TEST_CASE("polynomial noise shape") {
  const ModelDefinition def = parse_model_definition(
      "potential: {coeffs: [0, 0, 0.5]}\nnoise: {kind: polynomial, sigma: 0.5, shape: [1, 0, 0.1], s_cor: 0.1}\n"
      "domain: {lo: -3, hi: 3}\n");
  CHECK(def.model.intensity.kind() == NoiseIntensity::Kind::Polynomial);
  CHECK(def.model.intensity(2.0) == doctest::Approx(0.5 * 1.4));
  CHECK(parse_model_definition(to_config_text(def)).model == def.model);
}

TEST_CASE("configuration errors") {
  CHECK_THROWS_AS(parse_model_definition("noise: [1, 2"), ValidationError);
  CHECK_THROWS_AS(parse_model_definition("- 1\n- 2\n"), ValidationError);
  CHECK_THROWS_AS(parse_model_definition("noise: {sigma: abc}"), ValidationError);
  CHECK_THROWS_AS(parse_model_definition("noise: {kind: pink}"), ValidationError);
  CHECK_THROWS_AS(preset_definition("tristable"), ValidationError);
  CHECK_THROWS_AS(load_model_definition("/nonexistent/model.yaml"), IoError);
}

}
