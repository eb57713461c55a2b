#include "surveymon/provenance.h"

#include <fmt/format.h>

namespace surveymon::provenance {

std::string_view tool_version() { return SURVEYMON_VERSION; }

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_hash(const nlohmann::json& config) {
  // nlohmann::json keeps object keys in a std::map, so dump() is canonical.
  return fmt::format("{:016x}", fnv1a64(config.dump()));
}

nlohmann::ordered_json meta(std::string_view command, const nlohmann::json& config,
                            std::optional<std::uint64_t> seed) {
  nlohmann::ordered_json m;
  m["tool"] = "surveymon";
  m["version"] = tool_version();
  m["command"] = command;
  m["config_hash"] = config_hash(config);
  if (seed) m["seed"] = *seed;
  return m;
}

std::string csv_comment(const nlohmann::ordered_json& meta) {
  std::string line = "#";
  for (const auto& [key, value] : meta.items()) {
    line += fmt::format(" {}={}", key, value.is_string() ? value.get<std::string>() : value.dump());
  }
  line += '\n';
  return line;
}

}  // namespace surveymon::provenance
