#include "noisectl/config.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <optional>
#include <sstream>

#include "noisectl/error.hpp"

namespace noisectl {

ModelDefinition preset_definition(const std::string& name) {
  ModelDefinition def;
  def.name = name;
  if (name == "bistable") {
    def.model = presets::bistable();
    def.control = ControlParams{0.0, 0.0, 1.0};
  } else if (name == "laser") {
    def.model = presets::laser();
    def.control = ControlParams{0.0, 0.0, 42.0};
  } else {
    throw ValidationError("unknown preset '" + name + "' (expected bistable | laser)");
  }
  return def;
}

namespace {

std::optional<YAML::Node> lookup(const YAML::Node& root, const std::string& section,
                                 const std::string& key) {
  if (root[section] && root[section].IsMap() && root[section][key]) return root[section][key];
  const std::string dotted = section + "." + key;
  if (root[dotted]) return root[dotted];
  return std::nullopt;
}

template <typename T>
std::optional<T> get(const YAML::Node& root, const std::string& section, const std::string& key) {
  auto node = lookup(root, section, key);
  if (!node) return std::nullopt;
  try {
    return node->as<T>();
  } catch (const YAML::Exception& e) {
    throw ValidationError("config key " + section + "." + key + ": " + e.what());
  }
}

}  // namespace

ModelDefinition parse_model_definition(const std::string& text, const ModelDefinition& defaults) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ValidationError(std::string("malformed configuration: ") + e.what());
  }
  if (!root.IsMap() && !root.IsNull()) throw ValidationError("configuration must be a mapping");

  ModelDefinition def = defaults;
  if (root["name"]) def.name = root["name"].as<std::string>();
  if (auto c = get<std::vector<double>>(root, "potential", "coeffs")) def.model.potential = Polynomial(*c);

  auto kind = def.model.intensity.kind();
  if (auto k = get<std::string>(root, "noise", "kind")) kind = parse_noise_kind(*k);
  double sigma = def.model.intensity.sigma();
  if (auto s = get<double>(root, "noise", "sigma")) sigma = *s;
  switch (kind) {
    case NoiseIntensity::Kind::Additive:
      def.model.intensity = NoiseIntensity::additive(sigma);
      break;
    case NoiseIntensity::Kind::LinearMultiplicative:
      def.model.intensity = NoiseIntensity::linear_multiplicative(sigma);
      break;
    case NoiseIntensity::Kind::Polynomial: {
      auto shape = get<std::vector<double>>(root, "noise", "shape");
      Polynomial p = shape ? Polynomial(*shape) : def.model.intensity.shape();
      def.model.intensity = NoiseIntensity::polynomial(std::move(p)).with_sigma(sigma);
      break;
    }
  }
  if (auto s = get<double>(root, "noise", "s_cor")) def.model.s_cor = *s;
  if (auto v = get<double>(root, "domain", "lo")) def.model.domain.lo = *v;
  if (auto v = get<double>(root, "domain", "hi")) def.model.domain.hi = *v;
  if (auto v = get<double>(root, "control", "a")) def.control.a = *v;
  if (auto v = get<double>(root, "control", "tau")) def.control.tau = *v;
  if (auto v = get<double>(root, "control", "xhat")) def.control.xhat = *v;
  return def;
}

ModelDefinition load_model_definition(const std::filesystem::path& path,
                                      const ModelDefinition& defaults) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open configuration file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model_definition(buf.str(), defaults);
}

std::string to_config_text(const ModelDefinition& def) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "name" << YAML::Value << def.name;
  out << YAML::Key << "potential" << YAML::Value << YAML::BeginMap;
  const auto c = def.model.potential.coefficients();
  out << YAML::Key << "coeffs" << YAML::Value << YAML::Flow
      << std::vector<double>(c.begin(), c.end());
  out << YAML::EndMap;
  out << YAML::Key << "noise" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << to_string(def.model.intensity.kind());
  out << YAML::Key << "sigma" << YAML::Value << def.model.intensity.sigma();
  if (def.model.intensity.kind() == NoiseIntensity::Kind::Polynomial) {
    const auto s = def.model.intensity.shape().coefficients();
    out << YAML::Key << "shape" << YAML::Value << YAML::Flow
        << std::vector<double>(s.begin(), s.end());
  }
  out << YAML::Key << "s_cor" << YAML::Value << def.model.s_cor;
  out << YAML::EndMap;
  out << YAML::Key << "domain" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "lo" << YAML::Value << def.model.domain.lo;
  out << YAML::Key << "hi" << YAML::Value << def.model.domain.hi;
  out << YAML::EndMap;
  out << YAML::Key << "control" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "a" << YAML::Value << def.control.a;
  out << YAML::Key << "tau" << YAML::Value << def.control.tau;
  out << YAML::Key << "xhat" << YAML::Value << def.control.xhat;
  out << YAML::EndMap;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace noisectl
