#include "yaml_json.hpp"

#include <chipmap/error.hpp>
#include <chipmap/io.hpp>

#include <yaml-cpp/yaml.h>

namespace {

nlohmann::json convert(const YAML::Node& node) {
  switch (node.Type()) {
    case YAML::NodeType::Null:
    case YAML::NodeType::Undefined:
      return nullptr;
    case YAML::NodeType::Sequence: {
      auto arr = nlohmann::json::array();
      for (const auto& item : node) arr.push_back(convert(item));
      return arr;
    }
    case YAML::NodeType::Map: {
      auto obj = nlohmann::json::object();
      for (const auto& kv : node) obj[kv.first.as<std::string>()] = convert(kv.second);
      return obj;
    }
    case YAML::NodeType::Scalar:
      break;
  }
  const std::string text = node.Scalar();
  if (node.Tag() == "!") return text;  // quoted
  long long i = 0;
  if (YAML::convert<long long>::decode(node, i)) return i;
  double d = 0.0;
  if (YAML::convert<double>::decode(node, d)) return d;
  bool b = false;
  if (YAML::convert<bool>::decode(node, b)) return b;
  return text;
}

}  // namespace

nlohmann::json load_config_file(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".yaml" || ext == ".yml") {
    try {
      return convert(YAML::LoadFile(path.string()));
    } catch (const YAML::Exception& e) {
      chipmap::fail(chipmap::ErrorKind::Validation, "io", path.string() + ": " + e.what());
    }
  }
  return chipmap::read_json_file(path);
}
