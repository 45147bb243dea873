#pragma once

#include <string_view>

namespace cml {

inline constexpr std::string_view kCodeVersion = "0.1.0";

} // namespace cml
