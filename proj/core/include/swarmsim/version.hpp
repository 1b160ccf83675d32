#pragma once

#include <string_view>

namespace swarmsim {

inline constexpr std::string_view kToolName = "swarmsim";
inline constexpr std::string_view kToolVersion = "0.1.0";

}  // namespace swarmsim
