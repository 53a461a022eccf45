#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "alber/mixed_state.hpp"

namespace alber {

// JSON schemas are documented in docs/schemas.md.
inline constexpr const char* kStateSchema = "alber.state/1";
inline constexpr const char* kBackgroundSchema = "alber.background/1";

nlohmann::json to_json(const MixedState& state);
MixedState state_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const BackgroundSymbol& bg);
BackgroundSymbol background_from_json(const nlohmann::json& doc);

/// Decimal rendering with 17 significant digits (round-trips doubles).
std::string format_double(double value);

}  // namespace alber
