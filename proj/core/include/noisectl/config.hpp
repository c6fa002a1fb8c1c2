#pragma once

#include <filesystem>
#include <string>

#include "noisectl/model.hpp"

namespace noisectl {

/// A model together with its controller, as read from a configuration file.
///
/// Recognized keys (nested maps or flat dotted keys): potential.coeffs,
/// noise.kind, noise.sigma, noise.s_cor, noise.shape (polynomial kind only),
/// domain.lo, domain.hi, control.a, control.tau, control.xhat.
struct ModelDefinition {
  std::string name = "custom";
  ScalarModel model;
  ControlParams control;
};

/// Built-in "bistable" or "laser" definition (uncontrolled, control.xhat at
/// the desirable equilibrium).
ModelDefinition preset_definition(const std::string& name);

ModelDefinition parse_model_definition(const std::string& text,
                                       const ModelDefinition& defaults = {});
ModelDefinition load_model_definition(const std::filesystem::path& path,
                                      const ModelDefinition& defaults = {});

/// Serialized form that parse_model_definition reads back unchanged.
std::string to_config_text(const ModelDefinition& def);

}  // namespace noisectl
