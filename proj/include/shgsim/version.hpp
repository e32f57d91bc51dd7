#pragma once

namespace shgsim {

inline constexpr const char* tool_name = "shgsim";
inline constexpr const char* tool_version = "1.0.0";

}  // namespace shgsim
