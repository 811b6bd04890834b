#pragma once

#include <string>

#include "json.hpp"
#include "kpp/media.hpp"

namespace kpp::media {

nlohmann::json to_json(const PeriodicProfile& profile);
nlohmann::json to_json(const PhaseMap& phase);
nlohmann::json to_json(const TwoValueSequences& sequences);

/// {"profile": {...}, "phase": {...}} or {"two_value": {...}}.
nlohmann::json to_json(const Medium& medium);

PeriodicProfile profile_from_json(const nlohmann::json& j, const std::string& path = "profile");
PhaseMap phase_from_json(const nlohmann::json& j, const std::string& path = "phase");

/// Accepts explicit x_seq/y_seq or a {"geometric": {"K1", "K2", "x0"}}
/// generator in place of the sequences. Errors are ConfigError with the
/// offending field path.
Medium medium_from_json(const nlohmann::json& j, double x_max,
                        const std::string& path = "medium");

}  // namespace kpp::media
