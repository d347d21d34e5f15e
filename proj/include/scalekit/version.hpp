#pragma once

#include <string_view>

namespace scalekit {

inline constexpr std::string_view k_tool_name = "scalekit";
inline constexpr std::string_view k_tool_version = "0.1.0";

// Version string recorded in artifact provenance.
inline constexpr std::string_view k_tool_id = "scalekit 0.1.0";

} // namespace scalekit
