#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace surveymon::provenance {

std::string_view tool_version();

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);

/// FNV-1a over the compact dump with object keys sorted, as 16 hex digits.
std::string config_hash(const nlohmann::json& config);

/// {"tool", "version", "command", "config_hash", "seed"?}
nlohmann::ordered_json meta(std::string_view command, const nlohmann::json& config,
                            std::optional<std::uint64_t> seed = std::nullopt);

/// The same fields as a single '#' comment line for CSV outputs.
std::string csv_comment(const nlohmann::ordered_json& meta);

}  // namespace surveymon::provenance
